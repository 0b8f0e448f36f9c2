#include "certicos/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace certicos {

namespace {

// Row-major tableau. The objective row is kept reduced by the same
// eliminations as the body; it only steers pivot selection -- the verdict
// (feasibility, optimum) is recomputed from the basis at the end so drift in
// the objective row cannot flip a result.
struct Tableau {
    size_t m;
    size_t width;  // columns including rhs
    std::vector<double> body;
    std::vector<double> obj;
    std::vector<size_t> basis;
    double tol;

    Tableau(size_t rows, size_t cols, double tol_)
        : m(rows), width(cols), body(rows * cols, 0.0), obj(cols, 0.0), basis(rows, 0), tol(tol_) {}

    double* row(size_t r) { return body.data() + r * width; }
    const double* row(size_t r) const { return body.data() + r * width; }
    double rhs(size_t r) const { return row(r)[width - 1]; }

    void pivot(size_t r, size_t c) {
        double* pr = row(r);
        double inv = 1.0 / pr[c];
        for (size_t j = 0; j < width; ++j) pr[j] *= inv;
        pr[c] = 1.0;
        for (size_t i = 0; i < m; ++i) {
            if (i == r) continue;
            double* ri = row(i);
            double f = ri[c];
            if (f == 0.0) continue;
            for (size_t j = 0; j < width; ++j) ri[j] -= f * pr[j];
            ri[c] = 0.0;
        }
        double f = obj[c];
        if (f != 0.0) {
            for (size_t j = 0; j < width; ++j) obj[j] -= f * pr[j];
            obj[c] = 0.0;
        }
        basis[r] = c;
    }

    // Bland: lowest-index column whose reduced cost improves the objective.
    ptrdiff_t entering(size_t allowed_cols) const {
        for (size_t j = 0; j < allowed_cols; ++j)
            if (obj[j] < -tol) return static_cast<ptrdiff_t>(j);
        return -1;
    }

    // Minimum-ratio row; ties go to the row whose basic variable has the
    // lowest index (Bland again), which is what rules out cycling.
    ptrdiff_t leaving(size_t c) const {
        ptrdiff_t best = -1;
        double best_ratio = 0.0;
        for (size_t i = 0; i < m; ++i) {
            double a = row(i)[c];
            if (a <= tol) continue;
            double ratio = rhs(i) / a;
            if (best < 0 || ratio < best_ratio - tol ||
                (std::abs(ratio - best_ratio) <= tol &&
                 basis[i] < basis[static_cast<size_t>(best)])) {
                best = static_cast<ptrdiff_t>(i);
                best_ratio = ratio;
            }
        }
        return best;
    }
};

enum class LoopEnd { Optimal, NoLeavingRow, PivotCap };

LoopEnd run_pivots(Tableau& t, size_t allowed_cols, int& pivots, int max_pivots) {
    for (;;) {
        ptrdiff_t c = t.entering(allowed_cols);
        if (c < 0) return LoopEnd::Optimal;
        ptrdiff_t r = t.leaving(static_cast<size_t>(c));
        if (r < 0) return LoopEnd::NoLeavingRow;
        if (pivots >= max_pivots) return LoopEnd::PivotCap;
        t.pivot(static_cast<size_t>(r), static_cast<size_t>(c));
        ++pivots;
    }
}

}  // namespace

SimplexResult solve_dense_lp(const LinearProgram& lp, const SimplexOptions& opts) {
    const size_t d = lp.num_vars;
    const size_t m = lp.rows.size();
    if (lp.c.size() != d || lp.rhs.size() != m)
        throw std::invalid_argument("solve_dense_lp: shape mismatch");
    for (const auto& r : lp.rows)
        if (r.size() != d) throw std::invalid_argument("solve_dense_lp: row width mismatch");

    SimplexResult res;
    if (m == 0) {
        // no constraints: optimum is 0 at the origin unless c != 0, in which
        // case the problem is unbounded -- report Stalled, which proves nothing
        bool zero_c = std::all_of(lp.c.begin(), lp.c.end(), [](double v) { return v == 0.0; });
        res.status = zero_c ? SimplexStatus::Optimal : SimplexStatus::Stalled;
        res.x.assign(d, 0.0);
        return res;
    }

    const double tol = opts.pivot_tol;
    size_t n_art = 0;
    for (double b : lp.rhs)
        if (b < 0.0) ++n_art;

    const size_t split = 2 * d;
    const size_t slack_begin = split;
    const size_t art_begin = split + m;
    const size_t ncols = art_begin + n_art;
    const size_t width = ncols + 1;
    const int max_pivots =
        opts.max_pivots > 0 ? opts.max_pivots : static_cast<int>(200 + 25 * (m + split));

    Tableau t(m, width, tol);
    size_t art = art_begin;
    for (size_t i = 0; i < m; ++i) {
        double* r = t.row(i);
        double sign = lp.rhs[i] < 0.0 ? -1.0 : 1.0;
        for (size_t j = 0; j < d; ++j) {
            r[j] = sign * lp.rows[i][j];
            r[d + j] = -sign * lp.rows[i][j];
        }
        r[slack_begin + i] = sign;
        r[width - 1] = sign * lp.rhs[i];
        if (sign < 0.0) {
            r[art] = 1.0;
            t.basis[i] = art++;
        } else {
            t.basis[i] = slack_begin + i;
        }
    }

    // Phase 1: drive the artificials to zero (maximize -sum of artificials).
    if (n_art > 0) {
        for (size_t j = art_begin; j < ncols; ++j) t.obj[j] = 1.0;
        for (size_t i = 0; i < m; ++i) {
            if (t.basis[i] < art_begin) continue;
            const double* r = t.row(i);
            for (size_t j = 0; j < width; ++j) t.obj[j] -= r[j];
        }
        LoopEnd end = run_pivots(t, ncols, res.pivots, max_pivots);
        // the phase-1 objective is capped at zero, so "unbounded" here can
        // only be numerics; report Stalled rather than risk a false verdict
        if (end != LoopEnd::Optimal) return res;
        // phase-1 value straight from the basis, not the drifted obj row
        double art_sum = 0.0;
        for (size_t i = 0; i < m; ++i)
            if (t.basis[i] >= art_begin) art_sum += std::max(0.0, t.rhs(i));
        if (art_sum > 1e-8) {
            res.status = SimplexStatus::Infeasible;
            return res;
        }
        // pivot any zero-valued artificial out of the basis so a later pivot
        // cannot silently grow it again
        for (size_t i = 0; i < m; ++i) {
            if (t.basis[i] < art_begin) continue;
            const double* r = t.row(i);
            size_t j = 0;
            for (; j < art_begin; ++j)
                if (std::abs(r[j]) > tol) break;
            if (j < art_begin) {
                t.pivot(i, j);
                ++res.pivots;
            } else {
                // redundant row: zero it so it can never bind
                double* w = t.row(i);
                std::fill(w, w + width, 0.0);
            }
        }
    }

    // Phase 2: real objective, artificial columns locked out.
    std::fill(t.obj.begin(), t.obj.end(), 0.0);
    for (size_t j = 0; j < d; ++j) {
        t.obj[j] = -lp.c[j];
        t.obj[d + j] = lp.c[j];
    }
    for (size_t i = 0; i < m; ++i) {
        size_t b = t.basis[i];
        if (b >= ncols) continue;
        double cb = 0.0;
        if (b < d)
            cb = lp.c[b];
        else if (b < split)
            cb = -lp.c[b - d];
        if (cb == 0.0) continue;
        const double* r = t.row(i);
        for (size_t j = 0; j < width; ++j) t.obj[j] += cb * r[j];
        t.obj[b] = 0.0;
    }
    LoopEnd end = run_pivots(t, art_begin, res.pivots, max_pivots);
    if (end != LoopEnd::Optimal) return res;  // cap or unbounded: Stalled, proves nothing

    res.x.assign(d, 0.0);
    for (size_t i = 0; i < m; ++i) {
        size_t b = t.basis[i];
        if (b < d)
            res.x[b] += t.rhs(i);
        else if (b < split)
            res.x[b - d] -= t.rhs(i);
    }
    res.value = 0.0;
    for (size_t j = 0; j < d; ++j) res.value += lp.c[j] * res.x[j];
    res.status = SimplexStatus::Optimal;
    return res;
}

}  // namespace certicos
