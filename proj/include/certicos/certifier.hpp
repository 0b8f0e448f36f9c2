#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "certicos/simplex.hpp"
#include "certicos/vecstore.hpp"

namespace certicos {

/// One checked neighborhood: every dataset vector x with normal.x > bound is
/// already explored, so the unchecked region keeps only normal.x <= bound.
struct HalfspaceConstraint {
    std::vector<float> normal;  // unit dataset row
    double bound;               // neighborhood radius b_i
    uint32_t source_id;
};

/// The running description of the unchecked region
///   S = { |x| = 1,  q.x >= threshold,  normal_i.x <= bound_i for all i }.
/// threshold is the similarity of the current k-th best candidate, or -1
/// while fewer than k candidates exist (then the whole sphere is unchecked
/// and no certificate can close the query).
struct ConstraintStore {
    std::vector<float> q;
    double threshold = -1.0;
    std::vector<HalfspaceConstraint> constraints;

    void add(HalfspaceConstraint c);
};

// --- projection operators (in place) ---

void proj_constraint(std::span<double> x, const HalfspaceConstraint& c);
void proj_query_halfspace(std::span<double> x, std::span<const float> q, double threshold);
void proj_unit_ball(std::span<double> x);

enum class ProjectStatus {
    Feasible,      // converged to a point satisfying every constraint
    Empty,         // proved the intersection empty (infeasible fixed point)
    Inconclusive,  // sweep cap exhausted or contraction too slow to judge
};

struct ProjectOptions {
    double alpha = 0.95;        // early-abort drift envelope base
    int max_sweeps = 500;
    double converge_tol = 1e-10;  // |x - x_o| at or below this is a fixed point
    double feasible_tol = 1e-7;   // constraint slack allowed for a "feasible" fixed point
};

struct ProjectResult {
    ProjectStatus status = ProjectStatus::Inconclusive;
    std::vector<double> point;  // set only when Feasible
    int sweeps = 0;
};

/// Alternating projection onto the convex relaxation of S (unit *ball*
/// instead of sphere), sweeping constraints in insertion order, then the
/// query halfspace, then the ball. The first iterate inside every constraint
/// (within feasible_tol) decides Feasible; an infeasible fixed point is a
/// limit cycle collapsed onto itself, which certifies the intersection
/// empty. A drift above alpha^t on two consecutive sweeps only aborts the
/// run early (Inconclusive), and only while the iterate is still grossly
/// infeasible: slow contraction looks the same for thin feasible regions as
/// for empty ones, so it proves nothing.
ProjectResult solve_project(std::span<const double> x0, const ConstraintStore& store,
                            const ProjectOptions& opts = {});

/// LP relaxation: maximize q.x subject to q.x <= 1 and the ball constraints,
/// norm constraint dropped. Infeasible or optimum below threshold both prove
/// S empty.
SimplexResult solve_simplex(const ConstraintStore& store, const SimplexOptions& opts = {});

/// Pushes a feasible interior point to the sphere along the ray toward the
/// LP optimum: x = x_proj + u * sqrt((1 - |x_proj|^2)(1 - cos^2(x_proj, x_lp)))
/// with u the unit direction from x_proj to x_lp, falling back to the exact
/// quadratic root (the one with t >= 0) when that product form lands off the
/// sphere. ok=false when the two points nearly coincide.
struct CombineResult {
    bool ok = false;
    std::vector<double> x;
};
CombineResult combine_to_sphere(std::span<const double> x_proj, std::span<const double> x_lp);

/// Membership in S up to tol: |x| within tol of 1, q.x >= threshold - tol,
/// every ball constraint within tol.
bool in_unchecked_region(std::span<const double> x, const ConstraintStore& store,
                         double tol = 1e-6);

// --- certificate construction ---

enum class CertVerdict { Certified, Counterexample, Inconclusive };

enum class CertMechanism {
    None,
    SinglePoint,       // triangle-inequality test on the newest ball alone
    ProjectionEmpty,   // alternating projection proved S empty
    LpEmpty,           // LP optimum below threshold
    LpInfeasible,      // LP constraints themselves are contradictory
    LinearScan,        // exhaustive fallback outside the certifier proper
};

const char* mechanism_name(CertMechanism m);
const char* verdict_name(CertVerdict v);

struct CertOutcome {
    CertVerdict verdict = CertVerdict::Inconclusive;
    CertMechanism mechanism = CertMechanism::None;
    std::vector<double> point;  // unit counterexample when verdict says so
    int sweeps = 0;
    int lp_pivots = 0;
};

struct CertAuditRecord {
    CertVerdict verdict;
    CertMechanism mechanism;
    size_t constraint_count;
    bool full_cascade;
    int sweeps;
    int lp_pivots;
};

struct CertifierConfig {
    ProjectOptions project;
    SimplexOptions simplex;
    double member_tol = 1e-6;
    // when set, projection-empty alone is not trusted: the LP must confirm
    bool strict_soundness = false;
    std::function<void(const CertAuditRecord&)> audit;
};

/// The one-point angular test: with v_hat_sim = q.v_hat, v_j_sim = q.v_j and
/// b_j the radius of the newest completed neighborhood,
///   acos(v_hat_sim) + acos(v_j_sim) < acos(b_j) - slack
/// puts the whole unchecked cap inside the checked ball of v_j.
bool single_point_certificate(double v_hat_sim, double v_j_sim, double b_j);

/// Runs the mechanism cascade after a neighborhood completion. v_j_sim and
/// b_j describe the just-completed vertex. With cascade=false only the
/// single-point test runs (the search's rate limiter uses this).
CertOutcome construct_certificate(const ConstraintStore& store, double v_j_sim, double b_j,
                                  const CertifierConfig& cfg = {}, bool cascade = true);

}  // namespace certicos
