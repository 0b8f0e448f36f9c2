#pragma once

#include <cstdint>

#include "certicos/vecstore.hpp"

namespace certicos {

/// n points drawn uniformly from the unit sphere (normalized Gaussians).
UnitVectorSet make_uniform_set(uint64_t n, uint32_t d, uint64_t seed);

/// Clusters: centers uniform on the sphere, members center + sigma * Gaussian
/// noise, normalized. Vertices are dealt round-robin so ids mix clusters.
UnitVectorSet make_clustered_set(uint64_t n, uint32_t d, uint32_t clusters, double sigma,
                                 uint64_t seed);

/// Queries a la "perturb a dataset point": q = v_i + Gaussian(0, eps * I),
/// normalized, with the base index uniform over the set and eps uniform in
/// [eps_min, eps_max] per query.
UnitVectorSet make_perturbed_queries(const UnitVectorSet& base, uint64_t count, double eps_min,
                                     double eps_max, uint64_t seed);

}  // namespace certicos
