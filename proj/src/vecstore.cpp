#include "certicos/vecstore.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "bytes.hpp"

namespace certicos {

namespace {

constexpr char kMagic[4] = {'C', '2', 'V', 'D'};
constexpr uint32_t kVersion = 1;

// Rows this close to unit norm are left untouched by normalize_row. The
// residual of a fresh normalization is a few ulps per element (well under
// 1e-6), so renormalizing is a no-op and the operation is idempotent.
constexpr double kSkipNormTol = 1e-5;

// Accepted deviation from unit norm when loading with normalize=false.
constexpr double kAcceptNormTol = 1e-4;

double row_norm(std::span<const float> row) {
    double acc = 0.0;
    for (float v : row) {
        acc += static_cast<double>(v) * static_cast<double>(v);
    }
    return std::sqrt(acc);
}

}  // namespace

double l2_norm(std::span<const double> x) {
    double acc = 0.0;
    for (double v : x) acc += v * v;
    return std::sqrt(acc);
}

double l2_dist(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        double diff = a[i] - b[i];
        acc += diff * diff;
    }
    return std::sqrt(acc);
}

double cosine(std::span<const float> a, std::span<const float> b) {
    return std::clamp(dot(a, b), -1.0, 1.0);
}

void normalize_row(std::span<float> row) {
    const double norm = row_norm(row);
    if (!std::isfinite(norm) || norm == 0.0) {
        throw DataError("cannot normalize a zero or non-finite vector");
    }
    if (std::abs(norm - 1.0) <= kSkipNormTol) {
        return;
    }
    const double inv = 1.0 / norm;
    for (float& v : row) {
        v = static_cast<float>(static_cast<double>(v) * inv);
    }
}

UnitVectorSet make_vector_set(uint64_t n, uint32_t d, std::vector<float> data,
                              bool normalize) {
    if (n < 1) {
        throw DataError("vector set must contain at least one row");
    }
    if (d < 2) {
        throw DataError("vector dimension must be at least 2");
    }
    if (data.size() != n * static_cast<uint64_t>(d)) {
        throw DataError("row data size does not match n*d");
    }
    UnitVectorSet set{n, d, std::move(data)};
    for (uint64_t i = 0; i < n; ++i) {
        std::span<float> row{set.data.data() + i * d, d};
        if (normalize) {
            normalize_row(row);
        } else {
            const double norm = row_norm(row);
            if (!std::isfinite(norm) || norm == 0.0) {
                throw DataError("row " + std::to_string(i) + " is zero or non-finite");
            }
            if (std::abs(norm - 1.0) > kAcceptNormTol) {
                throw DataError("row " + std::to_string(i) +
                                " is not unit norm (pass normalize to fix)");
            }
        }
    }
    return set;
}

UnitVectorSet load_vectors(const std::string& path, bool normalize) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    if (!detail::read_magic(in, kMagic)) {
        throw FormatError(path + ": not a C2VD file (bad magic)");
    }
    const auto version = detail::read_scalar_or_throw<uint32_t>(in, "version");
    if (version != kVersion) {
        throw FormatError(path + ": unsupported C2VD version " + std::to_string(version));
    }
    const auto n = detail::read_scalar_or_throw<uint64_t>(in, "row count");
    const auto d = detail::read_scalar_or_throw<uint32_t>(in, "dimension");

    std::vector<float> data(n * static_cast<uint64_t>(d));
    const std::streamsize bytes = static_cast<std::streamsize>(data.size() * sizeof(float));
    in.read(reinterpret_cast<char*>(data.data()), bytes);
    if (in.gcount() != bytes) {
        throw TruncationError(path + ": file shorter than n*d rows");
    }
    if (in.peek() != std::ifstream::traits_type::eof()) {
        throw TruncationError(path + ": trailing bytes after n*d rows");
    }
    return make_vector_set(n, d, std::move(data), normalize);
}

void save_vectors(const UnitVectorSet& set, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path + " for writing");
    }
    detail::write_magic(out, kMagic);
    detail::write_scalar<uint32_t>(out, kVersion);
    detail::write_scalar<uint64_t>(out, set.n);
    detail::write_scalar<uint32_t>(out, set.d);
    out.write(reinterpret_cast<const char*>(set.data.data()),
              static_cast<std::streamsize>(set.data.size() * sizeof(float)));
    if (!out) {
        throw IoError("write failed for " + path);
    }
}

Query make_query(std::span<const float> q, uint32_t k_req, uint64_t budget) {
    if (k_req < 1) {
        throw DataError("k_req must be at least 1");
    }
    Query query;
    query.q.assign(q.begin(), q.end());
    normalize_row(query.q);
    query.k_req = k_req;
    query.budget = budget;
    return query;
}

std::vector<ScoredId> brute_force_topk(const UnitVectorSet& set,
                                       std::span<const float> q, uint32_t k) {
    if (k > set.n) {
        throw DataError("k exceeds the number of vectors");
    }
    std::vector<ScoredId> scored(set.n);
    for (uint64_t i = 0; i < set.n; ++i) {
        scored[i] = {static_cast<uint32_t>(i), dot(q, set.row(i))};
    }
    std::partial_sort(scored.begin(), scored.begin() + k, scored.end(), better);
    scored.resize(k);
    return scored;
}

}  // namespace certicos
