#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace certicos {

/// maximize c.x subject to rows[i].x <= rhs[i], x free in R^num_vars
struct LinearProgram {
    size_t num_vars = 0;
    std::vector<double> c;
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
};

enum class SimplexStatus {
    Optimal,     // x and value are the optimum
    Infeasible,  // the constraint system has no solution at all
    Stalled,     // pivot cap hit or numerics gave out; proves nothing
};

struct SimplexOptions {
    double pivot_tol = 1e-9;
    int max_pivots = 0;  // 0: scale with problem size
};

struct SimplexResult {
    SimplexStatus status = SimplexStatus::Stalled;
    std::vector<double> x;
    double value = 0.0;
    int pivots = 0;
};

/// Two-phase dense simplex over split variables (x = x+ - x-) with slack and
/// artificial columns, Bland's rule throughout. Deterministic.
SimplexResult solve_dense_lp(const LinearProgram& lp, const SimplexOptions& opts = {});

}  // namespace certicos
