#include "certicos/index_io.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include "bytes.hpp"

namespace certicos {

namespace {

constexpr char kMagic[4] = {'C', '2', 'I', 'X'};
constexpr uint32_t kVersion = 1;

const std::array<uint64_t, 256>& crc_table() {
    static const auto tbl = [] {
        std::array<uint64_t, 256> t{};
        for (uint32_t i = 0; i < 256; ++i) {
            uint64_t c = i;
            for (int k = 0; k < 8; ++k)
                c = (c & 1) ? (c >> 1) ^ 0xC96C5795D7870F42ull : (c >> 1);
            t[i] = c;
        }
        return t;
    }();
    return tbl;
}

}  // namespace

uint64_t crc64_xz(std::span<const uint8_t> bytes) {
    uint64_t crc = ~uint64_t{0};
    const auto& tbl = crc_table();
    for (uint8_t b : bytes) crc = tbl[(crc ^ b) & 0xFF] ^ (crc >> 8);
    return ~crc;
}

void save_index(const Index& index, const std::string& path) {
    const KnnGraph& g = index.graph;
    const LshSeeder& s = index.seeder;
    if (g.d != s.d) throw DataError("save_index: graph and seeder dimension mismatch");

    std::vector<uint8_t> payload;
    payload.reserve(g.adjacency.size() * 4 + g.radii.size() * 4 + s.planes.size() * 4 + 64);
    detail::append_scalar(payload, g.n);
    detail::append_scalar(payload, g.d);
    detail::append_scalar(payload, g.K);
    detail::append_bytes(payload, g.adjacency.data(), g.adjacency.size() * sizeof(uint32_t));
    detail::append_bytes(payload, g.radii.data(), g.radii.size() * sizeof(float));
    detail::append_scalar(payload, s.m);
    detail::append_scalar(payload, s.rng_seed);
    detail::append_bytes(payload, s.planes.data(), s.planes.size() * sizeof(float));
    detail::append_scalar(payload, static_cast<uint32_t>(s.codes.size()));
    for (size_t b = 0; b < s.codes.size(); ++b) {
        auto members = s.bucket(b);
        detail::append_scalar(payload, s.codes[b]);
        detail::append_scalar(payload, static_cast<uint32_t>(members.size()));
        detail::append_bytes(payload, members.data(), members.size() * sizeof(uint32_t));
    }

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path);
    detail::write_magic(out, kMagic);
    detail::write_scalar(out, kVersion);
    out.write(reinterpret_cast<const char*>(payload.data()),
              static_cast<std::streamsize>(payload.size()));
    detail::write_scalar(out, crc64_xz(payload));
    out.flush();
    if (!out) throw IoError("write failed: " + path);
}

Index load_index(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    std::vector<uint8_t> file((std::istreambuf_iterator<char>(in)),
                              std::istreambuf_iterator<char>());

    if (file.size() < 4 + 4 + 8) throw TruncationError("index file too short");
    if (std::memcmp(file.data(), kMagic, 4) != 0)
        throw FormatError("not a C2IX file (bad magic)");
    uint32_t version;
    std::memcpy(&version, file.data() + 4, 4);
    if (version != kVersion)
        throw FormatError("unsupported C2IX version " + std::to_string(version));

    const size_t payload_len = file.size() - 8 - 8;
    std::span<const uint8_t> payload(file.data() + 8, payload_len);
    uint64_t stored_crc;
    std::memcpy(&stored_crc, file.data() + 8 + payload_len, 8);
    if (crc64_xz(payload) != stored_crc)
        throw FormatError("index checksum mismatch (corrupt file)");

    detail::ByteCursor cur(payload.data(), payload.size());
    Index index;
    KnnGraph& g = index.graph;
    g.n = cur.take<uint64_t>("n");
    g.d = cur.take<uint32_t>("d");
    g.K = cur.take<uint32_t>("K");
    if (g.n == 0 || g.d < 2 || g.K == 0 || g.K > g.n - 1)
        throw FormatError("index header out of range");
    g.adjacency.resize(g.n * g.K);
    cur.take_into(g.adjacency.data(), g.adjacency.size() * sizeof(uint32_t), "adjacency");
    g.radii.resize(g.n);
    cur.take_into(g.radii.data(), g.radii.size() * sizeof(float), "radii");
    for (uint64_t i = 0; i < g.n; ++i)
        for (uint32_t r = 0; r < g.K; ++r) {
            uint32_t id = g.adjacency[i * g.K + r];
            if (id >= g.n || id == i) throw FormatError("index adjacency id out of range");
        }

    uint32_t m = cur.take<uint32_t>("m");
    uint64_t rng_seed = cur.take<uint64_t>("rng_seed");
    if (m < kMinPlanes || m > kMaxPlanes) throw FormatError("index plane count out of range");
    std::vector<float> planes(static_cast<size_t>(m) * g.d);
    cur.take_into(planes.data(), planes.size() * sizeof(float), "planes");
    uint32_t bucket_count = cur.take<uint32_t>("bucket_count");
    std::vector<uint32_t> codes;
    std::vector<uint32_t> starts;
    std::vector<uint32_t> ids;
    codes.reserve(bucket_count);
    starts.reserve(bucket_count + 1);
    for (uint32_t b = 0; b < bucket_count; ++b) {
        codes.push_back(cur.take<uint32_t>("bucket code"));
        uint32_t len = cur.take<uint32_t>("bucket length");
        starts.push_back(static_cast<uint32_t>(ids.size()));
        size_t at = ids.size();
        ids.resize(at + len);
        cur.take_into(ids.data() + at, len * sizeof(uint32_t), "bucket ids");
    }
    starts.push_back(static_cast<uint32_t>(ids.size()));
    if (cur.remaining() != 0) throw TruncationError("trailing bytes after index payload");

    // the buckets must partition [0, n)
    if (ids.size() != g.n) throw FormatError("index buckets do not cover the dataset");
    std::vector<uint8_t> seen(g.n, 0);
    for (uint32_t id : ids) {
        if (id >= g.n || seen[id]) throw FormatError("index bucket ids are not a partition");
        seen[id] = 1;
    }

    try {
        index.seeder = assemble_seeder(m, g.d, rng_seed, std::move(planes), std::move(codes),
                                       std::move(starts), std::move(ids));
    } catch (const DataError& e) {
        throw FormatError(e.what());  // in a load, a bad bucket table is file corruption
    }
    return index;
}

}  // namespace certicos
