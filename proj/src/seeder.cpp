#include "certicos/seeder.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "rng.hpp"

namespace certicos {

namespace {

// The plane table must be reproducible from the seed alone, hence the pinned
// Box-Muller stream instead of std::normal_distribution.
void fill_unit_row(detail::Rng& gs, float* row, uint32_t d) {
    for (;;) {
        double norm2 = 0.0;
        for (uint32_t t = 0; t < d; ++t) {
            double z = gs.gauss();
            row[t] = static_cast<float>(z);
            norm2 += z * z;
        }
        if (norm2 > 1e-24) {
            double inv = 1.0 / std::sqrt(norm2);
            for (uint32_t t = 0; t < d; ++t)
                row[t] = static_cast<float>(static_cast<double>(row[t]) * inv);
            return;
        }
        // astronomically unlikely; redraw rather than ship a zero plane
    }
}

}  // namespace

uint32_t LshSeeder::code_of(std::span<const float> x) const {
    if (x.size() != d) throw DataError("seeder: dimension mismatch");
    uint32_t code = 0;
    for (uint32_t t = 0; t < m; ++t) {
        if (dot(planes.data() + static_cast<size_t>(t) * d, x.data(), d) >= 0.0)
            code |= (1u << t);
    }
    return code;
}

uint32_t LshSeeder::seed(std::span<const float> x) const {
    if (codes.empty()) throw DataError("seeder: empty bucket table");
    uint32_t code = code_of(x);
    auto it = std::lower_bound(codes.begin(), codes.end(), code);
    if (it != codes.end() && *it == code)
        return ids[bucket_start[static_cast<size_t>(it - codes.begin())]];

    // Hamming fallback: nearest non-empty bucket, ties toward the lowest code.
    size_t best = 0;
    int best_dist = std::numeric_limits<int>::max();
    for (size_t b = 0; b < codes.size(); ++b) {
        int dist = std::popcount(code ^ codes[b]);
        if (dist < best_dist) {
            best_dist = dist;
            best = b;
        }
    }
    return ids[bucket_start[best]];
}

LshSeeder build_seeder(const UnitVectorSet& set, uint32_t m, uint64_t rng_seed) {
    if (m < kMinPlanes || m > kMaxPlanes)
        throw DataError("seeder: m must be in [1, 24]");

    LshSeeder s;
    s.m = m;
    s.d = set.d;
    s.rng_seed = rng_seed;
    s.planes.resize(static_cast<size_t>(m) * set.d);
    detail::Rng gs(rng_seed);
    for (uint32_t t = 0; t < m; ++t)
        fill_unit_row(gs, s.planes.data() + static_cast<size_t>(t) * set.d, set.d);

    std::vector<std::pair<uint32_t, uint32_t>> coded(set.n);
    for (uint64_t i = 0; i < set.n; ++i)
        coded[i] = {s.code_of(set.row(i)), static_cast<uint32_t>(i)};
    std::sort(coded.begin(), coded.end());

    s.ids.resize(set.n);
    for (uint64_t i = 0; i < set.n; ++i) {
        uint32_t code = coded[i].first;
        if (s.codes.empty() || s.codes.back() != code) {
            s.codes.push_back(code);
            s.bucket_start.push_back(static_cast<uint32_t>(i));
        }
        s.ids[i] = coded[i].second;
    }
    s.bucket_start.push_back(static_cast<uint32_t>(set.n));
    return s;
}

LshSeeder assemble_seeder(uint32_t m, uint32_t d, uint64_t rng_seed, std::vector<float> planes,
                          std::vector<uint32_t> codes, std::vector<uint32_t> bucket_start,
                          std::vector<uint32_t> ids) {
    if (m < kMinPlanes || m > kMaxPlanes)
        throw DataError("seeder: m must be in [1, 24]");
    if (planes.size() != static_cast<size_t>(m) * d)
        throw DataError("seeder: plane table size mismatch");
    if (bucket_start.size() != codes.size() + 1 || bucket_start.empty() ||
        bucket_start.front() != 0 || bucket_start.back() != ids.size())
        throw DataError("seeder: malformed bucket table");
    for (size_t b = 0; b + 1 < codes.size(); ++b)
        if (codes[b] >= codes[b + 1]) throw DataError("seeder: bucket codes not increasing");
    for (size_t b = 0; b < codes.size(); ++b) {
        if (bucket_start[b] >= bucket_start[b + 1])
            throw DataError("seeder: empty bucket record");
        for (uint32_t k = bucket_start[b] + 1; k < bucket_start[b + 1]; ++k)
            if (ids[k - 1] >= ids[k]) throw DataError("seeder: bucket ids not ascending");
    }

    LshSeeder s;
    s.m = m;
    s.d = d;
    s.rng_seed = rng_seed;
    s.planes = std::move(planes);
    s.codes = std::move(codes);
    s.bucket_start = std::move(bucket_start);
    s.ids = std::move(ids);
    return s;
}

}  // namespace certicos
