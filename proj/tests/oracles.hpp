#pragma once

// Independent reference implementations the tests compare the library
// against. Deliberately naive: plain sequential accumulation, full sorts,
// exhaustive enumeration. Anything clever belongs in the library, not here.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "certicos/simplex.hpp"
#include "certicos/vecstore.hpp"

namespace oracle {

inline double plain_dot(std::span<const float> a, std::span<const float> b) {
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i)
        acc += static_cast<double>(a[i]) * static_cast<double>(b[i]);
    return acc;
}

struct Hit {
    uint32_t id;
    double sim;
};

inline std::vector<Hit> topk(const certicos::UnitVectorSet& set, std::span<const float> q,
                             uint32_t k, int64_t exclude = -1) {
    std::vector<Hit> all;
    all.reserve(set.n);
    for (uint64_t i = 0; i < set.n; ++i) {
        if (static_cast<int64_t>(i) == exclude) continue;
        all.push_back({static_cast<uint32_t>(i), plain_dot(set.row(i), q)});
    }
    std::sort(all.begin(), all.end(), [](const Hit& a, const Hit& b) {
        return a.sim > b.sim || (a.sim == b.sim && a.id < b.id);
    });
    all.resize(std::min<size_t>(k, all.size()));
    return all;
}

// exact neighborhoods by full sort, one row at a time
inline std::vector<std::vector<Hit>> knng(const certicos::UnitVectorSet& set, uint32_t K) {
    std::vector<std::vector<Hit>> out(set.n);
    for (uint64_t i = 0; i < set.n; ++i)
        out[i] = topk(set, set.row(i), K, static_cast<int64_t>(i));
    return out;
}

// --- LP vertex enumeration -------------------------------------------------
// Solves max c.x st rows.x <= rhs by trying every d-subset of constraints as
// an active set: solve the square system, keep feasible solutions, take the
// best objective. Valid for LPs known to be bounded with a vertex optimum.

struct EnumResult {
    bool feasible = false;
    double value = 0.0;
    std::vector<double> x;
};

// Gaussian elimination with partial pivoting; false when singular.
inline bool solve_square(std::vector<std::vector<double>> a, std::vector<double> b,
                         std::vector<double>& x) {
    const size_t d = b.size();
    for (size_t col = 0; col < d; ++col) {
        size_t piv = col;
        for (size_t r = col + 1; r < d; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-12) return false;
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (size_t r = col + 1; r < d; ++r) {
            double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (size_t c2 = col; c2 < d; ++c2) a[r][c2] -= f * a[col][c2];
            b[r] -= f * b[col];
        }
    }
    x.assign(d, 0.0);
    for (size_t r = d; r-- > 0;) {
        double acc = b[r];
        for (size_t c2 = r + 1; c2 < d; ++c2) acc -= a[r][c2] * x[c2];
        x[r] = acc / a[r][r];
    }
    return true;
}

inline EnumResult lp_enumerate(const certicos::LinearProgram& lp, double feas_tol = 1e-9) {
    const size_t d = lp.num_vars;
    const size_t m = lp.rows.size();
    EnumResult best;
    if (m < d) return best;  // no vertex; caller guarantees this cannot happen

    // iterate over all d-combinations of [0, m)
    std::vector<size_t> idx(d);
    for (size_t i = 0; i < d; ++i) idx[i] = i;
    for (;;) {
        std::vector<std::vector<double>> a(d);
        std::vector<double> b(d);
        for (size_t i = 0; i < d; ++i) {
            a[i] = lp.rows[idx[i]];
            b[i] = lp.rhs[idx[i]];
        }
        std::vector<double> x;
        if (solve_square(std::move(a), std::move(b), x)) {
            bool ok = true;
            for (size_t r = 0; r < m && ok; ++r) {
                double lhs = 0.0;
                for (size_t c2 = 0; c2 < d; ++c2) lhs += lp.rows[r][c2] * x[c2];
                ok = lhs <= lp.rhs[r] + feas_tol;
            }
            if (ok) {
                double val = 0.0;
                for (size_t c2 = 0; c2 < d; ++c2) val += lp.c[c2] * x[c2];
                if (!best.feasible || val > best.value) {
                    best.feasible = true;
                    best.value = val;
                    best.x = x;
                }
            }
        }
        // next combination
        size_t i = d;
        while (i-- > 0) {
            if (idx[i] != i + m - d) {
                ++idx[i];
                for (size_t j = i + 1; j < d; ++j) idx[j] = idx[j - 1] + 1;
                break;
            }
            if (i == 0) return best;
        }
    }
}

// Exact sphere intersection x_proj + t*u with t >= 0 chosen by the quadratic
// formula; the reference for combine_to_sphere.
inline std::vector<double> sphere_root(std::span<const double> x_proj,
                                       std::span<const double> x_lp) {
    const size_t d = x_proj.size();
    std::vector<double> u(d);
    double norm = 0.0;
    for (size_t i = 0; i < d; ++i) {
        u[i] = x_lp[i] - x_proj[i];
        norm += u[i] * u[i];
    }
    norm = std::sqrt(norm);
    for (double& v : u) v /= norm;
    double pu = 0.0, pp = 0.0;
    for (size_t i = 0; i < d; ++i) {
        pu += x_proj[i] * u[i];
        pp += x_proj[i] * x_proj[i];
    }
    double t = -pu + std::sqrt(pu * pu + 1.0 - pp);
    std::vector<double> x(d);
    for (size_t i = 0; i < d; ++i) x[i] = x_proj[i] + t * u[i];
    return x;
}

}  // namespace oracle
