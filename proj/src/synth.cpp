#include "certicos/synth.hpp"

#include <cmath>

#include "rng.hpp"

namespace certicos {

namespace {

void gauss_row(detail::Rng& rng, float* row, uint32_t d) {
    for (uint32_t t = 0; t < d; ++t) row[t] = static_cast<float>(rng.gauss());
}

}  // namespace

UnitVectorSet make_uniform_set(uint64_t n, uint32_t d, uint64_t seed) {
    std::vector<float> data(n * d);
    detail::Rng rng(seed);
    for (uint64_t i = 0; i < n; ++i) gauss_row(rng, data.data() + i * d, d);
    return make_vector_set(n, d, std::move(data), /*normalize=*/true);
}

UnitVectorSet make_clustered_set(uint64_t n, uint32_t d, uint32_t clusters, double sigma,
                                 uint64_t seed) {
    if (clusters == 0) throw DataError("synth: need at least one cluster");
    detail::Rng rng(seed);
    std::vector<float> centers(static_cast<size_t>(clusters) * d);
    for (uint32_t c = 0; c < clusters; ++c) {
        std::span<float> row{centers.data() + static_cast<size_t>(c) * d, d};
        gauss_row(rng, row.data(), d);
        normalize_row(row);
    }
    std::vector<float> data(n * d);
    for (uint64_t i = 0; i < n; ++i) {
        const float* center = centers.data() + static_cast<size_t>(i % clusters) * d;
        float* row = data.data() + i * d;
        for (uint32_t t = 0; t < d; ++t)
            row[t] = static_cast<float>(center[t] + sigma * rng.gauss());
    }
    return make_vector_set(n, d, std::move(data), /*normalize=*/true);
}

UnitVectorSet make_perturbed_queries(const UnitVectorSet& base, uint64_t count, double eps_min,
                                     double eps_max, uint64_t seed) {
    if (eps_min < 0.0 || eps_max < eps_min) throw DataError("synth: bad epsilon range");
    detail::Rng rng(seed);
    std::vector<float> data(count * base.d);
    for (uint64_t i = 0; i < count; ++i) {
        const float* v = base.row(rng.below(base.n)).data();
        double eps = eps_min + (eps_max - eps_min) * rng.u01();
        double scale = std::sqrt(eps);  // eps is the noise variance per coordinate
        float* row = data.data() + i * base.d;
        for (uint32_t t = 0; t < base.d; ++t)
            row[t] = static_cast<float>(v[t] + scale * rng.gauss());
    }
    return make_vector_set(count, base.d, std::move(data), /*normalize=*/true);
}

}  // namespace certicos
