#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "certicos/vecstore.hpp"

namespace certicos {

/// Exact K-nearest-neighbor graph. adjacency holds each vertex's top-K
/// neighbor ids sorted by descending similarity (ties by ascending id);
/// radii[i] is the similarity of the K-th neighbor, so every vector with
/// similarity strictly above radii[i] to vertex i is guaranteed to be listed.
struct KnnGraph {
    uint64_t n = 0;
    uint32_t d = 0;
    uint32_t K = 0;
    std::vector<uint32_t> adjacency;  // n * K
    std::vector<float> radii;         // n

    std::span<const uint32_t> neighbors(uint64_t i) const {
        return {adjacency.data() + i * K, K};
    }
};

/// Builds the exact graph by a blocked all-pairs scan, O(n^2 d).
/// Deterministic and independent of the worker count (workers=0 picks the
/// hardware concurrency).
KnnGraph build_knng(const UnitVectorSet& set, uint32_t K, unsigned workers = 0);

/// A vector that should have been in N_i but is not: sim(i, missing) is
/// strictly above the stored radius b_i.
struct KnngViolation {
    uint32_t vertex;
    uint32_t missing;
    double sim;
};

/// Exhaustive check of the neighborhood property. Empty result means every
/// vertex's radius-ball is fully contained in its stored neighbor list.
std::vector<KnngViolation> verify_knng(const UnitVectorSet& set, const KnnGraph& g);

}  // namespace certicos
