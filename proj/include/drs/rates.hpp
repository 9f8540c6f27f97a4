#pragma once

#include "drs/operators.hpp"
#include "drs/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace drs {

enum class RateQuantity { DR_POWER, DR_SHADOW_U, DR_SHADOW_V, TTSTAR_POWER, MAP_EVEN, MAP_ODD };

inline const char* to_string(RateQuantity q) {
    switch (q) {
        case RateQuantity::DR_POWER: return "DR_POWER";
        case RateQuantity::DR_SHADOW_U: return "DR_SHADOW_U";
        case RateQuantity::DR_SHADOW_V: return "DR_SHADOW_V";
        case RateQuantity::TTSTAR_POWER: return "TTSTAR_POWER";
        case RateQuantity::MAP_EVEN: return "MAP_EVEN";
        default: return "MAP_ODD";
    }
}

struct RateRow {
    int n;
    RateQuantity quantity;
    double measured;
    double predicted;
};

/// Measured operator-norm decay of the tracked power sequences against the
/// exact rates driven by the Friedrichs cosine c: ‖Tⁿ − P_Fix‖ and the two
/// shadow norms decay like cⁿ, ‖(TT*)ⁿ − P_Fix‖ and the odd alternating
/// product like c²ⁿ, the even alternating product like c²ⁿ⁻¹.
struct RateReport {
    double friedrichs_cos = 0.0;
    std::vector<RateRow> rows; // sorted by n, quantity order within n
    double max_relative_error = 0.0;
};

/// Dense evaluation of all six tracked quantities for n = 1..n_max. Powers
/// are formed by repeated multiplication; the limit projector is subtracted
/// once per measurement, never folded into the product.
inline RateReport rate_report(const Subspace& u, const Subspace& v, int n_max = 20,
                              int dim_limit = 400) {
    detail::require(u.ambient_dim() == v.ambient_dim(), "rate_report: dimension mismatch");
    detail::require(n_max >= 1, "rate_report: n_max must be at least 1");
    detail::require(u.ambient_dim() <= dim_limit,
                    "rate_report: ambient dimension exceeds the dense materialization limit");

    const Matrix pu = projector_matrix(u);
    const Matrix pv = projector_matrix(v);
    const Matrix t = dr_operator(u, v).matrix();
    const Matrix tts = t * t.transpose();
    const Matrix m = pv * pu;
    const Matrix pf = fix_projector(u, v).matrix();
    const Matrix pi = projector_matrix(intersect(u, v));

    RateReport report;
    report.friedrichs_cos = principal_angles(u, v).friedrichs_cos;
    const double c = report.friedrichs_cos;

    Matrix t_n = t;
    Matrix tts_n = tts;
    Matrix m_n = m;
    for (int n = 1; n <= n_max; ++n) {
        const double cn = std::pow(c, n);
        const double c2n = std::pow(c, 2 * n);
        const double c2nm1 = std::pow(c, 2 * n - 1);
        report.rows.push_back({n, RateQuantity::DR_POWER, operator_norm(Matrix(t_n - pf)), cn});
        report.rows.push_back({n, RateQuantity::DR_SHADOW_U, operator_norm(Matrix(pu * t_n - pi)), cn});
        report.rows.push_back({n, RateQuantity::DR_SHADOW_V, operator_norm(Matrix(pv * t_n - pi)), cn});
        report.rows.push_back({n, RateQuantity::TTSTAR_POWER, operator_norm(Matrix(tts_n - pf)), c2n});
        report.rows.push_back({n, RateQuantity::MAP_EVEN, operator_norm(Matrix(m_n - pi)), c2nm1});
        report.rows.push_back({n, RateQuantity::MAP_ODD, operator_norm(Matrix(pu * m_n - pi)), c2n});
        if (n == n_max) break;
        t_n = t_n * t;
        tts_n = tts_n * tts;
        m_n = m_n * m;
    }

    // Relative error only where the prediction is well above rounding noise.
    for (const auto& row : report.rows) {
        if (row.predicted >= 1e-10) {
            const double rel = std::abs(row.measured - row.predicted) / row.predicted;
            report.max_relative_error = std::max(report.max_relative_error, rel);
        }
    }
    return report;
}

/// Worst slack of the pointwise contraction bound along a single orbit:
/// min over n = 1..n_max of cⁿ‖x₀ − P_Fix x₀‖ − ‖Tⁿx₀ − P_Fix x₀‖.
/// Nonnegative up to rounding when the rate identities hold.
inline double pointwise_bound_check(const Subspace& u, const Subspace& v, const Vector& x0,
                                    int n_max) {
    detail::require(u.ambient_dim() == v.ambient_dim(), "pointwise_bound_check: dimension mismatch");
    check_dims(u, x0, "pointwise_bound_check");
    detail::require(n_max >= 1, "pointwise_bound_check: n_max must be at least 1");

    const double c = principal_angles(u, v).friedrichs_cos;
    const Subspace both = intersect(u, v);
    const Subspace both_perp = intersect(complement(u), complement(v));
    const Vector fix = project(both, x0) + project(both_perp, x0);
    const double base = (x0 - fix).norm();

    double worst = std::numeric_limits<double>::infinity();
    Vector x = x0;
    for (int n = 1; n <= n_max; ++n) {
        const Vector pu = project(u, x);
        x = project(v, 2.0 * pu - x) + x - pu;
        const double slack = std::pow(c, n) * base - (x - fix).norm();
        worst = std::min(worst, slack);
    }
    return worst;
}

} // namespace drs
