#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace certicos {

/// Malformed file header (wrong magic or unsupported version).
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// File payload shorter (or longer) than the header promises.
struct TruncationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Content that parses but violates a data invariant (zero rows, bad norms,
/// out-of-range parameters, ...).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The operating system said no (open/write failure).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Dot product of two float rows, accumulated in double. Every similarity in
/// the engine goes through this one kernel so that build, search, and the
/// brute-force oracle agree bit-for-bit. Four independent accumulators break
/// the add dependency chain; the combination order is fixed, so the result
/// is still a deterministic function of the inputs.
inline double dot(const float* a, const float* b, size_t d) {
    double acc0 = 0.0, acc1 = 0.0, acc2 = 0.0, acc3 = 0.0;
    size_t i = 0;
    for (; i + 4 <= d; i += 4) {
        acc0 += static_cast<double>(a[i]) * static_cast<double>(b[i]);
        acc1 += static_cast<double>(a[i + 1]) * static_cast<double>(b[i + 1]);
        acc2 += static_cast<double>(a[i + 2]) * static_cast<double>(b[i + 2]);
        acc3 += static_cast<double>(a[i + 3]) * static_cast<double>(b[i + 3]);
    }
    for (; i < d; ++i) acc0 += static_cast<double>(a[i]) * static_cast<double>(b[i]);
    return (acc0 + acc1) + (acc2 + acc3);
}

inline double dot(std::span<const float> a, std::span<const float> b) {
    return dot(a.data(), b.data(), a.size());
}

// Mixed- and double-precision variants for the certifier's iterates.
inline double dot(const double* a, const float* b, size_t d) {
    double acc = 0.0;
    for (size_t i = 0; i < d; ++i) acc += a[i] * static_cast<double>(b[i]);
    return acc;
}

inline double dot(std::span<const double> a, std::span<const float> b) {
    return dot(a.data(), b.data(), a.size());
}

inline double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double l2_norm(std::span<const double> x);
double l2_dist(std::span<const double> a, std::span<const double> b);

/// Cosine similarity of two unit vectors, clamped to [-1, 1].
double cosine(std::span<const float> a, std::span<const float> b);

/// Row-major set of n unit-norm d-dimensional float vectors, ids 0..n-1.
/// Immutable after construction; safe for concurrent readers.
struct UnitVectorSet {
    uint64_t n = 0;
    uint32_t d = 0;
    std::vector<float> data;  // n * d, row-major

    std::span<const float> row(uint64_t i) const {
        return {data.data() + i * d, d};
    }
};

/// Normalizes one row in place (double-precision norm). Rows already within
/// 1e-5 of unit norm are left untouched, which makes normalization idempotent
/// bit-for-bit. Throws DataError on zero or non-finite rows.
void normalize_row(std::span<float> row);

/// Builds a set from raw row-major data. With normalize=false, rows must
/// already be within 1e-4 of unit norm.
UnitVectorSet make_vector_set(uint64_t n, uint32_t d, std::vector<float> data,
                              bool normalize);

/// Reads a C2VD file: "C2VD" | u32 version=1 | u64 n | u32 d | n*d f32,
/// little-endian, no padding.
UnitVectorSet load_vectors(const std::string& path, bool normalize);

void save_vectors(const UnitVectorSet& set, const std::string& path);

/// A normalized query with its result size and expansion budget.
struct Query {
    std::vector<float> q;
    uint32_t k_req = 1;
    uint64_t budget = 0;
};

Query make_query(std::span<const float> q, uint32_t k_req, uint64_t budget);

struct ScoredId {
    uint32_t id;
    double sim;
};

/// Canonical result order: higher similarity first, ties by ascending id.
inline bool better(const ScoredId& a, const ScoredId& b) {
    return a.sim > b.sim || (a.sim == b.sim && a.id < b.id);
}

/// Exact top-k by linear scan; the exactness oracle for everything else.
std::vector<ScoredId> brute_force_topk(const UnitVectorSet& set,
                                       std::span<const float> q, uint32_t k);

}  // namespace certicos
