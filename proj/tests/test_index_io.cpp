#include <cstring>
#include <fstream>
#include <random>

#include "certicos/index_io.hpp"
#include "doctest.h"
#include "testutil.hpp"

using namespace certicos;
using testutil::TempDir;

namespace {

Index small_index(uint64_t n, uint32_t d, uint32_t K, uint32_t m, uint32_t seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<float> g;
    std::vector<float> data(n * d);
    for (auto& v : data) v = g(rng);
    auto set = make_vector_set(n, d, std::move(data), true);
    return Index{build_knng(set, K, 1), build_seeder(set, m, 4242)};
}

// Rewrites a C2IX file after mutating its payload, restoring a valid
// checksum so the structural checks downstream of the CRC are reachable.
void patch_payload(const std::string& path, void (*mutate)(std::vector<uint8_t>&)) {
    auto bytes = testutil::slurp(path);
    std::vector<uint8_t> payload(bytes.begin() + 8, bytes.end() - 8);
    mutate(payload);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), 8);
    out.write(reinterpret_cast<const char*>(payload.data()),
              static_cast<std::streamsize>(payload.size()));
    uint64_t crc = crc64_xz(payload);
    out.write(reinterpret_cast<const char*>(&crc), 8);
}

}  // namespace

TEST_CASE("crc64_xz known answers") {
    const char* probe = "123456789";
    CHECK(crc64_xz({reinterpret_cast<const uint8_t*>(probe), 9}) == 0x995DC9BBDF1939FAull);
    CHECK(crc64_xz({}) == 0);
    // sensitive to every byte
    uint8_t one[1] = {0};
    uint8_t two[1] = {1};
    CHECK(crc64_xz({one, 1}) != crc64_xz({two, 1}));
}

TEST_CASE("save/load roundtrip preserves everything") {
    TempDir tmp;
    auto path = tmp.file("i.c2ix");
    auto idx = small_index(50, 4, 6, 4, 31);
    save_index(idx, path);
    auto back = load_index(path);

    CHECK(back.graph.n == idx.graph.n);
    CHECK(back.graph.d == idx.graph.d);
    CHECK(back.graph.K == idx.graph.K);
    CHECK(back.graph.adjacency == idx.graph.adjacency);
    REQUIRE(back.graph.radii.size() == idx.graph.radii.size());
    CHECK(std::memcmp(back.graph.radii.data(), idx.graph.radii.data(),
                      idx.graph.radii.size() * sizeof(float)) == 0);

    CHECK(back.seeder.m == idx.seeder.m);
    CHECK(back.seeder.d == idx.seeder.d);
    CHECK(back.seeder.rng_seed == idx.seeder.rng_seed);
    CHECK(std::memcmp(back.seeder.planes.data(), idx.seeder.planes.data(),
                      idx.seeder.planes.size() * sizeof(float)) == 0);
    CHECK(back.seeder.codes == idx.seeder.codes);
    CHECK(back.seeder.bucket_start == idx.seeder.bucket_start);
    CHECK(back.seeder.ids == idx.seeder.ids);
}

TEST_CASE("save_index writes are reproducible byte for byte") {
    TempDir tmp;
    auto idx = small_index(30, 3, 4, 3, 32);
    save_index(idx, tmp.file("a.c2ix"));
    save_index(idx, tmp.file("b.c2ix"));
    CHECK(testutil::slurp(tmp.file("a.c2ix")) == testutil::slurp(tmp.file("b.c2ix")));
    CHECK(testutil::slurp(tmp.file("a.c2ix")).substr(0, 4) == "C2IX");
}

TEST_CASE("save_index rejects mismatched parts") {
    auto idx = small_index(30, 3, 4, 3, 33);
    idx.seeder.d = 4;
    TempDir tmp;
    CHECK_THROWS_AS(save_index(idx, tmp.file("x.c2ix")), DataError);
}

TEST_CASE("load_index failure modes") {
    TempDir tmp;
    auto path = tmp.file("i.c2ix");
    save_index(small_index(40, 4, 5, 4, 34), path);
    auto pristine = testutil::slurp(path);
    auto rewrite = [&](const std::string& bytes) {
        std::ofstream(path, std::ios::binary | std::ios::trunc) << bytes;
    };

    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_index(tmp.file("absent.c2ix")), IoError);
    }
    SUBCASE("too short for any header") {
        rewrite(pristine.substr(0, 10));
        CHECK_THROWS_AS(load_index(path), TruncationError);
    }
    SUBCASE("bad magic") {
        auto bytes = pristine;
        bytes[2] = 'Z';
        rewrite(bytes);
        CHECK_THROWS_AS(load_index(path), FormatError);
    }
    SUBCASE("unsupported version") {
        auto bytes = pristine;
        bytes[4] = 9;
        rewrite(bytes);
        CHECK_THROWS_AS(load_index(path), FormatError);
    }
    SUBCASE("bit flip anywhere in the payload breaks the checksum") {
        for (size_t at : {8u, 40u, 200u}) {
            auto bytes = pristine;
            bytes[at] ^= 0x40;
            rewrite(bytes);
            CHECK_THROWS_AS(load_index(path), FormatError);
        }
    }
    SUBCASE("stored checksum itself flipped") {
        auto bytes = pristine;
        bytes[bytes.size() - 1] ^= 0x01;
        rewrite(bytes);
        CHECK_THROWS_AS(load_index(path), FormatError);
    }
    SUBCASE("valid checksum, payload cut short") {
        patch_payload(path, [](std::vector<uint8_t>& p) { p.resize(p.size() - 4); });
        CHECK_THROWS_AS(load_index(path), TruncationError);
    }
    SUBCASE("valid checksum, trailing bytes") {
        patch_payload(path, [](std::vector<uint8_t>& p) { p.push_back(0); });
        CHECK_THROWS_AS(load_index(path), TruncationError);
    }
    SUBCASE("valid checksum, K out of range") {
        patch_payload(path, [](std::vector<uint8_t>& p) {
            uint32_t k = 0;
            std::memcpy(p.data() + 12, &k, 4);  // after n(8) and d(4)
        });
        CHECK_THROWS_AS(load_index(path), FormatError);
    }
    SUBCASE("valid checksum, self-loop in the adjacency") {
        patch_payload(path, [](std::vector<uint8_t>& p) {
            uint32_t self = 0;
            std::memcpy(p.data() + 16, &self, 4);  // first neighbor of vertex 0
        });
        CHECK_THROWS_AS(load_index(path), FormatError);
    }
    SUBCASE("valid checksum, adjacency id past n") {
        patch_payload(path, [](std::vector<uint8_t>& p) {
            uint32_t big = 1000;
            std::memcpy(p.data() + 16, &big, 4);
        });
        CHECK_THROWS_AS(load_index(path), FormatError);
    }
    SUBCASE("bucket table that does not partition the ids") {
        auto idx = small_index(40, 4, 5, 4, 34);
        idx.seeder.ids[0] = idx.seeder.ids[1];  // duplicate one id
        save_index(idx, path);
        CHECK_THROWS_AS(load_index(path), FormatError);
    }
    SUBCASE("pristine file still loads after all that") {
        rewrite(pristine);
        CHECK_NOTHROW(load_index(path));
    }
}
