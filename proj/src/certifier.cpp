#include "certicos/certifier.hpp"

#include <algorithm>
#include <cmath>

namespace certicos {

namespace {

constexpr double kAngleSlack = 1e-9;   // subtracted from acos(b_j) in the one-point test
constexpr double kLpCertMargin = 1e-7;  // LP optimum must clear the threshold by this
constexpr double kDegenerateGap = 1e-12;
constexpr double kCombineNormTol = 1e-6;  // product form accepted within this of the sphere
constexpr double kGrossViolation = 1e-3;  // slow runs this close to feasible are not abandoned

double clamp1(double v) { return std::clamp(v, -1.0, 1.0); }

bool feasible_point(std::span<const double> x, const ConstraintStore& store, double tol) {
    if (l2_norm(x) > 1.0 + tol) return false;
    if (dot(x, std::span<const float>(store.q)) < store.threshold - tol) return false;
    for (const auto& c : store.constraints) {
        if (dot(x.data(), c.normal.data(), x.size()) > c.bound + tol) return false;
    }
    return true;
}

}  // namespace

void ConstraintStore::add(HalfspaceConstraint c) {
    if (!q.empty() && c.normal.size() != q.size())
        throw DataError("constraint dimension mismatch");
    for (const auto& existing : constraints)
        if (existing.source_id == c.source_id)
            throw DataError("duplicate constraint source " + std::to_string(c.source_id));
    constraints.push_back(std::move(c));
}

void proj_constraint(std::span<double> x, const HalfspaceConstraint& c) {
    double viol = dot(x.data(), c.normal.data(), x.size()) - c.bound;
    if (viol <= 0.0) return;
    // normals are float rows, unit only to float precision; dividing by the
    // actual squared norm keeps the landing point on the boundary
    double scale = viol / dot(c.normal.data(), c.normal.data(), x.size());
    for (size_t i = 0; i < x.size(); ++i)
        x[i] -= scale * static_cast<double>(c.normal[i]);
}

void proj_query_halfspace(std::span<double> x, std::span<const float> q, double threshold) {
    double deficit = threshold - dot(x.data(), q.data(), x.size());
    if (deficit <= 0.0) return;
    double scale = deficit / dot(q.data(), q.data(), x.size());
    for (size_t i = 0; i < x.size(); ++i)
        x[i] += scale * static_cast<double>(q[i]);
}

void proj_unit_ball(std::span<double> x) {
    double norm = l2_norm(x);
    if (norm <= 1.0) return;
    double inv = 1.0 / norm;
    for (double& v : x) v *= inv;
}

ProjectResult solve_project(std::span<const double> x0, const ConstraintStore& store,
                            const ProjectOptions& opts) {
    ProjectResult res;
    std::vector<double> x(x0.begin(), x0.end());
    std::vector<double> x_o(x.size());
    double envelope = 1.0;
    bool runaway = false;

    for (int t = 1; t <= opts.max_sweeps; ++t) {
        x_o = x;
        for (const auto& c : store.constraints) proj_constraint(x, c);
        proj_query_halfspace(x, store.q, store.threshold);
        proj_unit_ball(x);

        res.sweeps = t;
        if (feasible_point(x, store, opts.feasible_tol)) {
            // a point in hand settles non-emptiness regardless of convergence
            res.status = ProjectStatus::Feasible;
            res.point = std::move(x);
            return res;
        }
        double disp = l2_dist(x, x_o);
        if (disp <= opts.converge_tol) {
            // An infeasible fixed point is the alternating sequence collapsed
            // between disjoint sets, which certifies emptiness.
            res.status = ProjectStatus::Empty;
            return res;
        }
        envelope *= opts.alpha;
        if (disp > envelope) {
            // Two consecutive escapes of the geometric envelope mean the run
            // is oscillating or crawling. That is NOT proof of emptiness --
            // thin feasible wedges contract slower than alpha per sweep and
            // produce the same signature -- so only runs still grossly off
            // every verdict get abandoned; near-feasible slowpokes keep
            // sweeping toward the gate above.
            if (runaway && !feasible_point(x, store, kGrossViolation)) {
                res.status = ProjectStatus::Inconclusive;
                return res;
            }
            runaway = true;
        } else {
            runaway = false;
        }
    }
    res.status = ProjectStatus::Inconclusive;
    return res;
}

SimplexResult solve_simplex(const ConstraintStore& store, const SimplexOptions& opts) {
    const size_t d = store.q.size();
    LinearProgram lp;
    lp.num_vars = d;
    lp.c.assign(store.q.begin(), store.q.end());
    lp.rows.reserve(store.constraints.size() + 1);
    lp.rhs.reserve(store.constraints.size() + 1);
    lp.rows.emplace_back(lp.c);  // q.x <= 1 caps the dropped norm constraint
    lp.rhs.push_back(1.0);
    for (const auto& c : store.constraints) {
        lp.rows.emplace_back(c.normal.begin(), c.normal.end());
        lp.rhs.push_back(c.bound);
    }
    return solve_dense_lp(lp, opts);
}

CombineResult combine_to_sphere(std::span<const double> x_proj, std::span<const double> x_lp) {
    CombineResult res;
    const size_t d = x_proj.size();
    std::vector<double> u(d);
    double gap2 = 0.0;
    for (size_t i = 0; i < d; ++i) {
        u[i] = x_lp[i] - x_proj[i];
        gap2 += u[i] * u[i];
    }
    double gap = std::sqrt(gap2);
    if (gap <= kDegenerateGap) return res;  // coincident points, no direction
    for (double& v : u) v *= 1.0 / gap;

    const double np = l2_norm(x_proj);
    const double nl = l2_norm(x_lp);
    const double inside = std::max(0.0, 1.0 - np * np);

    // exact intersection of the ray x_proj + t*u with the sphere, t >= 0;
    // disc >= 0 because inside >= 0, and sqrt(disc) >= |pu| makes t >= 0
    double pu = dot(std::span<const double>(x_proj), std::span<const double>(u));
    double t = -pu + std::sqrt(pu * pu + inside);

    // the square-root formula assumes a geometry it does not always get;
    // keep its value only when it lands on the exact root (a step that far
    // from t can sit near the sphere yet far from the crossing when the ray
    // runs almost tangent)
    if (np > kDegenerateGap && nl > kDegenerateGap) {
        double cosang = clamp1(dot(x_proj, x_lp) / (np * nl));
        double step = std::sqrt(inside * std::max(0.0, 1.0 - cosang * cosang));
        if (std::abs(step - t) <= kCombineNormTol) t = step;
    }

    res.x.resize(d);
    for (size_t i = 0; i < d; ++i) res.x[i] = x_proj[i] + t * u[i];
    res.ok = true;
    return res;
}

bool in_unchecked_region(std::span<const double> x, const ConstraintStore& store, double tol) {
    if (std::abs(l2_norm(x) - 1.0) > tol) return false;
    if (dot(x, std::span<const float>(store.q)) < store.threshold - tol) return false;
    for (const auto& c : store.constraints)
        if (dot(x.data(), c.normal.data(), x.size()) > c.bound + tol) return false;
    return true;
}

bool single_point_certificate(double v_hat_sim, double v_j_sim, double b_j) {
    double lhs = std::acos(clamp1(v_hat_sim)) + std::acos(clamp1(v_j_sim));
    return lhs < std::acos(clamp1(b_j)) - kAngleSlack;
}

const char* mechanism_name(CertMechanism m) {
    switch (m) {
        case CertMechanism::SinglePoint: return "single-point";
        case CertMechanism::ProjectionEmpty: return "projection-empty";
        case CertMechanism::LpEmpty: return "lp-empty";
        case CertMechanism::LpInfeasible: return "lp-infeasible";
        case CertMechanism::LinearScan: return "linear-scan";
        case CertMechanism::None: break;
    }
    return "none";
}

const char* verdict_name(CertVerdict v) {
    switch (v) {
        case CertVerdict::Certified: return "certified";
        case CertVerdict::Counterexample: return "counterexample";
        case CertVerdict::Inconclusive: break;
    }
    return "inconclusive";
}

namespace {

CertOutcome finish(CertOutcome out, const ConstraintStore& store, bool cascade,
                   const CertifierConfig& cfg) {
    if (cfg.audit) {
        cfg.audit({out.verdict, out.mechanism, store.constraints.size(), cascade, out.sweeps,
                   out.lp_pivots});
    }
    return out;
}

// LP-backed emptiness checks shared by the strict path and the main cascade.
// Only clean verdicts certify; Stalled never does.
bool lp_proves_empty(const SimplexResult& lp, double threshold, CertMechanism& mech) {
    if (lp.status == SimplexStatus::Infeasible) {
        mech = CertMechanism::LpInfeasible;
        return true;
    }
    if (lp.status == SimplexStatus::Optimal && lp.value < threshold - kLpCertMargin) {
        mech = CertMechanism::LpEmpty;
        return true;
    }
    return false;
}

}  // namespace

CertOutcome construct_certificate(const ConstraintStore& store, double v_j_sim, double b_j,
                                  const CertifierConfig& cfg, bool cascade) {
    CertOutcome out;
    const double thr = store.threshold;
    if (thr <= -1.0) return finish(std::move(out), store, cascade, cfg);

    if (single_point_certificate(thr, v_j_sim, b_j)) {
        out.verdict = CertVerdict::Certified;
        out.mechanism = CertMechanism::SinglePoint;
        return finish(std::move(out), store, cascade, cfg);
    }
    if (!cascade) return finish(std::move(out), store, cascade, cfg);

    std::vector<double> x0(store.q.begin(), store.q.end());
    ProjectResult pr = solve_project(x0, store, cfg.project);
    out.sweeps = pr.sweeps;

    if (pr.status == ProjectStatus::Empty) {
        if (!cfg.strict_soundness) {
            out.verdict = CertVerdict::Certified;
            out.mechanism = CertMechanism::ProjectionEmpty;
        } else {
            SimplexResult lp = solve_simplex(store, cfg.simplex);
            out.lp_pivots = lp.pivots;
            if (lp_proves_empty(lp, thr, out.mechanism)) out.verdict = CertVerdict::Certified;
        }
        return finish(std::move(out), store, cascade, cfg);
    }

    if (pr.status == ProjectStatus::Feasible) {
        // the convex-relaxation point may already sit on the sphere
        std::vector<double> xn = pr.point;
        double norm = l2_norm(xn);
        if (norm > kDegenerateGap) {
            for (double& v : xn) v /= norm;
            if (in_unchecked_region(xn, store, cfg.member_tol)) {
                out.verdict = CertVerdict::Counterexample;
                out.point = std::move(xn);
                return finish(std::move(out), store, cascade, cfg);
            }
        }
    }

    SimplexResult lp = solve_simplex(store, cfg.simplex);
    out.lp_pivots = lp.pivots;
    if (lp_proves_empty(lp, thr, out.mechanism)) {
        out.verdict = CertVerdict::Certified;
        return finish(std::move(out), store, cascade, cfg);
    }
    if (lp.status != SimplexStatus::Optimal) return finish(std::move(out), store, cascade, cfg);

    // relaxation optimum strictly inside the ball: the spherical cap may or
    // may not be empty, and there is no ray to push along either way
    if (l2_norm(lp.x) < 1.0) return finish(std::move(out), store, cascade, cfg);

    if (pr.status == ProjectStatus::Feasible) {
        CombineResult cb = combine_to_sphere(pr.point, lp.x);
        if (cb.ok && in_unchecked_region(cb.x, store, cfg.member_tol)) {
            out.verdict = CertVerdict::Counterexample;
            out.point = std::move(cb.x);
        }
    }
    return finish(std::move(out), store, cascade, cfg);
}

}  // namespace certicos
