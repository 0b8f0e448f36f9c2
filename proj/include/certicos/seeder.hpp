#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "certicos/vecstore.hpp"

namespace certicos {

/// Signed-random-projection seeder: m unit-norm Gaussian hyperplanes hash
/// every dataset vector to an m-bit code (bit t set iff plane_t . v >= 0).
/// Buckets are kept sorted by code, ids ascending inside each bucket, so a
/// rebuild from the same seed reproduces the table byte for byte.
struct LshSeeder {
    uint32_t m = 0;
    uint32_t d = 0;
    uint64_t rng_seed = 0;
    std::vector<float> planes;  // m * d, unit rows

    std::vector<uint32_t> codes;         // sorted ascending, one per non-empty bucket
    std::vector<uint32_t> bucket_start;  // codes.size()+1 offsets into ids
    std::vector<uint32_t> ids;           // concatenated bucket members

    uint32_t code_of(std::span<const float> x) const;

    /// Entry point for a query: the lowest id in the query's bucket, or --
    /// when that bucket is empty -- in the nearest non-empty bucket by
    /// Hamming distance (ties broken toward the lowest code).
    uint32_t seed(std::span<const float> x) const;

    std::span<const uint32_t> bucket(size_t idx) const {
        return {ids.data() + bucket_start[idx], bucket_start[idx + 1] - bucket_start[idx]};
    }
};

inline constexpr uint32_t kMinPlanes = 1;
inline constexpr uint32_t kMaxPlanes = 24;

/// Draws the planes from rng_seed and hashes the whole set. m in [1, 24].
LshSeeder build_seeder(const UnitVectorSet& set, uint32_t m, uint64_t rng_seed);

/// Reassembles a seeder from stored parts (index load path); ids within each
/// bucket must already be ascending and codes strictly increasing.
LshSeeder assemble_seeder(uint32_t m, uint32_t d, uint64_t rng_seed, std::vector<float> planes,
                          std::vector<uint32_t> codes, std::vector<uint32_t> bucket_start,
                          std::vector<uint32_t> ids);

}  // namespace certicos
