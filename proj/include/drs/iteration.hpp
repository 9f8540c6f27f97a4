#pragma once

#include "drs/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace drs {

enum class Method { DR, MAP };

inline const char* to_string(Method m) { return m == Method::DR ? "DR" : "MAP"; }

/// Stopping rule for the iteration drivers. TrueError and MaxDistance test
/// the monitored point; FixedCount is handled by the driver's step counter.
struct StoppingRule {
    enum class Kind { TrueError, MaxDistance, FixedCount };

    Kind kind;
    double epsilon = 0.0;
    long count = 0;

    static StoppingRule true_error(double eps) {
        detail::require(eps > 0.0, "StoppingRule: epsilon must be positive");
        return {Kind::TrueError, eps, 0};
    }
    static StoppingRule max_distance(double eps) {
        detail::require(eps > 0.0, "StoppingRule: epsilon must be positive");
        return {Kind::MaxDistance, eps, 0};
    }
    static StoppingRule fixed_count(long n) {
        detail::require(n >= 1, "StoppingRule: count must be at least 1");
        return {Kind::FixedCount, 0.0, n};
    }

    std::string describe() const {
        switch (kind) {
            case Kind::TrueError: return "TrueError";
            case Kind::MaxDistance: return "MaxDistance";
            default: return "FixedCount(" + std::to_string(count) + ")";
        }
    }
};

/// True when the rule fires at the monitored point z. Count-based rules
/// always return false here; the driver applies them to its own counter.
inline bool evaluate_rule(const StoppingRule& rule, const Subspace& u, const Subspace& v,
                          const Subspace& u_cap_v, const Vector& z) {
    switch (rule.kind) {
        case StoppingRule::Kind::TrueError:
            return distance_to(u_cap_v, z) < rule.epsilon;
        case StoppingRule::Kind::MaxDistance:
            return std::max(distance_to(u, z), distance_to(v, z)) < rule.epsilon;
        default:
            return false;
    }
}

struct TraceStep {
    long n = 0;
    double true_error = 0.0;   // distance of the monitored point to U∩V
    double dist_u = 0.0;       // distance of the monitored point to U
    double dist_v = 0.0;       // distance of the monitored point to V
    double err_iterate = 0.0;  // ‖state − limit of the driver sequence‖
    double err_shadow_u = 0.0; // ‖P_U state − solution‖
    double err_shadow_v = 0.0; // ‖P_V state − solution‖
    // Present only when the driver was asked to keep vectors.
    std::optional<Vector> iterate, shadow_u, shadow_v;
};

/// Full record of one driver run. `solution` is the projection of the start
/// onto U∩V, the limit of the monitored sequence. For DR runs `fix_point`
/// is the limit of the un-projected iterates; for MAP it equals `solution`.
struct IterationTrace {
    Method method = Method::DR;
    std::vector<TraceStep> steps;
    std::string terminated_by;
    bool capped = false;
    Vector solution;
    Vector fix_point;

    long iterations() const { return steps.empty() ? 0 : steps.back().n; }
};

namespace detail {

// One splitting step in composition form: two projections, no materialized
// operator. pu must be project(U, x).
inline Vector dr_step(const Subspace& u, const Subspace& v, const Vector& x, const Vector& pu) {
    (void)u;
    return project(v, 2.0 * pu - x) + x - pu;
}

struct AffineFrame {
    // Common point of the two affine sets and the linear-part subspaces.
    Vector common_point;
    Subspace dir_u;
    Subspace dir_v;
};

inline AffineFrame make_affine_frame(const AffineSubspace& ua, const AffineSubspace& va) {
    require(ua.direction.ambient_dim() == va.direction.ambient_dim(),
            "run_dr_affine: dimension mismatch");
    const Vector gap = va.anchor - ua.anchor;

    // Feasibility: the anchor gap must lie in direction_U + direction_V.
    const int d = ua.direction.ambient_dim();
    Matrix span(d, ua.direction.dim() + va.direction.dim());
    span << ua.direction.basis(), va.direction.basis();
    const Subspace sum = orthonormalize(span);
    require(distance_to(sum, gap) <= 1e-8,
            "run_dr_affine: affine subspaces do not intersect");

    // Any common point: solve Q_U a − Q_V b = gap in least squares.
    Vector common = ua.anchor;
    if (span.cols() > 0) {
        Matrix system(d, span.cols());
        system << ua.direction.basis(), -va.direction.basis();
        const Vector coeffs = system.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(gap);
        common += ua.direction.basis() * coeffs.head(ua.direction.dim());
    }
    return {std::move(common), ua.direction, va.direction};
}

enum class FireState { NotYet, Fired, Capped };

template <typename StepFn, typename MonitorFn>
IterationTrace run_iteration(Method method, const Subspace& u, const Subspace& v,
                             const Subspace& u_cap_v, Vector state, const StoppingRule& rule,
                             long cap, bool store_vectors, Vector solution, Vector fix_point,
                             StepFn step, MonitorFn monitored) {
    require(cap >= 1, "iteration: cap must be at least 1");
    IterationTrace trace;
    trace.method = method;
    trace.solution = std::move(solution);
    trace.fix_point = std::move(fix_point);

    for (long n = 0;; ++n) {
        const Vector pu = project(u, state);
        const Vector pv = project(v, state);
        const Vector z = monitored(state, pu);

        TraceStep rec;
        rec.n = n;
        rec.true_error = distance_to(u_cap_v, z);
        rec.dist_u = distance_to(u, z);
        rec.dist_v = distance_to(v, z);
        rec.err_iterate = (state - trace.fix_point).norm();
        rec.err_shadow_u = (pu - trace.solution).norm();
        rec.err_shadow_v = (pv - trace.solution).norm();
        if (store_vectors) {
            rec.iterate = state;
            rec.shadow_u = pu;
            rec.shadow_v = pv;
        }
        trace.steps.push_back(std::move(rec));

        bool fired = false;
        switch (rule.kind) {
            case StoppingRule::Kind::TrueError:
                fired = trace.steps.back().true_error < rule.epsilon;
                break;
            case StoppingRule::Kind::MaxDistance:
                fired = std::max(trace.steps.back().dist_u, trace.steps.back().dist_v) < rule.epsilon;
                break;
            case StoppingRule::Kind::FixedCount:
                fired = n == rule.count;
                break;
        }
        if (fired) {
            trace.terminated_by = rule.describe() + " at n=" + std::to_string(n);
            return trace;
        }
        if (n == cap) {
            trace.terminated_by = "CapExhausted at n=" + std::to_string(n);
            trace.capped = true;
            return trace;
        }
        state = step(state, pu);
    }
}

} // namespace detail

/// Douglas–Rachford driver. Applies the operator in composition form and
/// monitors the shadow sequence P_U(state).
inline IterationTrace run_dr(const Subspace& u, const Subspace& v, const Vector& x0,
                             const StoppingRule& rule, long cap, bool store_vectors = false) {
    detail::require(u.ambient_dim() == v.ambient_dim(), "run_dr: dimension mismatch");
    check_dims(u, x0, "run_dr");
    const Subspace u_cap_v = intersect(u, v);
    const Subspace perp_cap = intersect(complement(u), complement(v));
    Vector solution = project(u_cap_v, x0);
    Vector fix_point = solution + project(perp_cap, x0);
    return detail::run_iteration(
        Method::DR, u, v, u_cap_v, x0, rule, cap, store_vectors, std::move(solution),
        std::move(fix_point),
        [&u, &v](const Vector& x, const Vector& pu) { return detail::dr_step(u, v, x, pu); },
        [](const Vector&, const Vector& pu) { return pu; });
}

/// Alternating-projections driver; the iterate itself is monitored.
inline IterationTrace run_map(const Subspace& u, const Subspace& v, const Vector& x0,
                              const StoppingRule& rule, long cap, bool store_vectors = false) {
    detail::require(u.ambient_dim() == v.ambient_dim(), "run_map: dimension mismatch");
    check_dims(u, x0, "run_map");
    const Subspace u_cap_v = intersect(u, v);
    Vector solution = project(u_cap_v, x0);
    Vector fix_point = solution;
    return detail::run_iteration(
        Method::MAP, u, v, u_cap_v, x0, rule, cap, store_vectors, std::move(solution),
        std::move(fix_point), [&v](const Vector&, const Vector& pu) { return project(v, pu); },
        [](const Vector& x, const Vector&) { return x; });
}

/// Affine variant of run_dr. Projectors become P_W(x) = a + P_{W−a}(x − a)
/// throughout; everything is monitored against the affine intersection.
/// Throws when the affine sets do not intersect (anchor gap outside
/// direction_U + direction_V, tolerance 1e-8).
inline IterationTrace run_dr_affine(const AffineSubspace& ua, const AffineSubspace& va,
                                    const Vector& x0, const StoppingRule& rule, long cap,
                                    bool store_vectors = false) {
    detail::require(x0.size() == ua.direction.ambient_dim(), "run_dr_affine: dimension mismatch");
    detail::require(cap >= 1, "run_dr_affine: cap must be at least 1");
    const detail::AffineFrame frame = detail::make_affine_frame(ua, va);
    const Vector& p = frame.common_point;

    const Subspace& du = frame.dir_u;
    const Subspace& dv = frame.dir_v;
    const Subspace dir_cap = intersect(du, dv);
    const Subspace perp_cap = intersect(complement(du), complement(dv));
    const AffineSubspace meet(p, dir_cap);

    IterationTrace trace;
    trace.method = Method::DR;
    trace.solution = project(meet, x0);
    trace.fix_point = trace.solution + project(perp_cap, x0 - p);

    Vector x = x0;
    for (long n = 0;; ++n) {
        const Vector pu = project(ua, x);
        const Vector pv = project(va, x);
        const Vector& z = pu; // monitored shadow

        TraceStep rec;
        rec.n = n;
        rec.true_error = distance_to(meet, z);
        rec.dist_u = distance_to(ua, z);
        rec.dist_v = distance_to(va, z);
        rec.err_iterate = (x - trace.fix_point).norm();
        rec.err_shadow_u = (pu - trace.solution).norm();
        rec.err_shadow_v = (pv - trace.solution).norm();
        if (store_vectors) {
            rec.iterate = x;
            rec.shadow_u = pu;
            rec.shadow_v = pv;
        }
        trace.steps.push_back(std::move(rec));

        bool fired = false;
        switch (rule.kind) {
            case StoppingRule::Kind::TrueError:
                fired = trace.steps.back().true_error < rule.epsilon;
                break;
            case StoppingRule::Kind::MaxDistance:
                fired = std::max(trace.steps.back().dist_u, trace.steps.back().dist_v) < rule.epsilon;
                break;
            case StoppingRule::Kind::FixedCount:
                fired = n == rule.count;
                break;
        }
        if (fired) {
            trace.terminated_by = rule.describe() + " at n=" + std::to_string(n);
            return trace;
        }
        if (n == cap) {
            trace.terminated_by = "CapExhausted at n=" + std::to_string(n);
            trace.capped = true;
            return trace;
        }
        x = project(va, 2.0 * pu - x) + x - pu;
    }
}

} // namespace drs
