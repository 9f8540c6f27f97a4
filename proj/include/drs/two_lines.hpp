#pragma once

#include "drs/subspace.hpp"
#include "drs/text_format.hpp"

#include <cmath>
#include <ostream>
#include <string>
#include <vector>

namespace drs {

inline constexpr double kPi = 3.14159265358979323846;

/// Two lines through the origin of R²: the horizontal axis and the line at
/// angle theta ∈ (0, π/2]. Closed forms for every iteration quantity are
/// available here and validate the general machinery to machine precision.
struct PlaneConfig {
    double theta;

    explicit PlaneConfig(double t) : theta(t) {
        detail::require(t > 0.0 && t <= kPi / 2.0 + 1e-15,
                        "PlaneConfig: theta must lie in (0, pi/2]");
    }
};

inline Eigen::Matrix2d rotation(double theta) {
    Eigen::Matrix2d r;
    r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    return r;
}

/// The horizontal axis R·(1,0).
inline Subspace horizontal_line() {
    Matrix b(2, 1);
    b << 1.0, 0.0;
    return Subspace(2, b);
}

/// The line R·(cos θ, sin θ).
inline Subspace line_at(double theta) {
    Matrix b(2, 1);
    b << std::cos(theta), std::sin(theta);
    return Subspace(2, b);
}

/// Tⁿ in closed form: cosⁿ(θ)·R_{nθ}.
inline Eigen::Matrix2d closed_form_dr_power(const PlaneConfig& cfg, long n) {
    detail::require(n >= 0, "closed_form_dr_power: n must be nonnegative");
    return std::pow(std::cos(cfg.theta), static_cast<double>(n)) *
           rotation(static_cast<double>(n) * cfg.theta);
}

struct TwoLineNorms {
    double dr_norm;     // ‖Tⁿx‖       = cosⁿθ ‖x‖
    double shadow_norm; // ‖P_U Tⁿx‖   = cosⁿθ |cos(nθ)x₁ − sin(nθ)x₂|
    double map_norm;    // ‖(P_VP_U)ⁿx‖ = cos²ⁿ⁻¹θ |x₁|
};

inline TwoLineNorms closed_form_norms(const PlaneConfig& cfg, const Vector& x, long n) {
    detail::require(x.size() == 2, "closed_form_norms: x must live in the plane");
    detail::require(n >= 1, "closed_form_norms: n must be at least 1");
    const double c = std::cos(cfg.theta);
    const double nn = static_cast<double>(n);
    const double cn = std::pow(c, nn);
    TwoLineNorms out;
    out.dr_norm = cn * x.norm();
    out.shadow_norm = cn * std::abs(std::cos(nn * cfg.theta) * x(0) - std::sin(nn * cfg.theta) * x(1));
    out.map_norm = std::pow(c, 2.0 * nn - 1.0) * std::abs(x(0));
    return out;
}

enum class PlaneQuantity { DR, MAP, SHADOW };

inline const char* to_string(PlaneQuantity q) {
    switch (q) {
        case PlaneQuantity::DR: return "DR";
        case PlaneQuantity::MAP: return "MAP";
        default: return "SHADOW";
    }
}

/// Distance-to-solution surfaces over the angle parametrization
/// θ(t) = (π/2)t³, start point e₀. Evaluated directly from the closed
/// forms, so the t = 0 edge (identical lines) is simply the constant 1.
struct SurfaceGrid {
    PlaneQuantity quantity;
    std::vector<double> t_values;
    std::vector<long> n_values;
    std::vector<double> values; // row-major: values[i*n_count + j] for (t_i, n_j)

    double at(std::size_t ti, std::size_t nj) const { return values[ti * n_values.size() + nj]; }
};

inline double surface_value(PlaneQuantity q, double t, long n) {
    const double theta = (kPi / 2.0) * t * t * t;
    const double c = std::cos(theta);
    const double nn = static_cast<double>(n);
    switch (q) {
        case PlaneQuantity::DR: return std::pow(c, nn);
        case PlaneQuantity::MAP: return std::pow(c, 2.0 * nn - 1.0);
        default: return std::pow(c, nn) * std::abs(std::cos(nn * theta));
    }
}

inline SurfaceGrid figure_surface(const std::vector<double>& t_grid,
                                  const std::vector<long>& n_grid, PlaneQuantity quantity) {
    detail::require(!t_grid.empty() && !n_grid.empty(), "figure_surface: grids must be nonempty");
    for (double t : t_grid)
        detail::require(t >= 0.0 && t <= 1.0, "figure_surface: t values must lie in [0,1]");
    for (long n : n_grid) detail::require(n >= 1, "figure_surface: n values must be at least 1");

    SurfaceGrid grid;
    grid.quantity = quantity;
    grid.t_values = t_grid;
    grid.n_values = n_grid;
    grid.values.reserve(t_grid.size() * n_grid.size());
    for (double t : t_grid)
        for (long n : n_grid) grid.values.push_back(surface_value(quantity, t, n));
    return grid;
}

// Columnar data format shared by the figure emitters:
// header "# quantity theta_param n value", whitespace-separated rows, where
// theta_param is the t of the parametrization θ = (π/2)t³.

inline void write_surface(std::ostream& os, const SurfaceGrid& grid) {
    os << "# quantity theta_param n value\n";
    for (std::size_t i = 0; i < grid.t_values.size(); ++i)
        for (std::size_t j = 0; j < grid.n_values.size(); ++j)
            os << to_string(grid.quantity) << ' ' << format_double(grid.t_values[i]) << ' '
               << format_int(grid.n_values[j]) << ' ' << format_double(grid.at(i, j)) << '\n';
}

/// The three fixed-angle decay curves (distance of DR iterate, DR shadow and
/// alternating-projections iterate to the solution) for n = 1..n_max, x = e₀.
inline void write_curves(std::ostream& os, double theta, long n_max) {
    detail::require(n_max >= 1, "write_curves: n_max must be at least 1");
    const PlaneConfig cfg(theta);
    Vector e0(2);
    e0 << 1.0, 0.0;
    const double t = std::cbrt(theta / (kPi / 2.0));
    os << "# quantity theta_param n value\n";
    for (long n = 1; n <= n_max; ++n) {
        const TwoLineNorms norms = closed_form_norms(cfg, e0, n);
        os << "DR " << format_double(t) << ' ' << format_int(n) << ' '
           << format_double(norms.dr_norm) << '\n';
        os << "SHADOW " << format_double(t) << ' ' << format_int(n) << ' '
           << format_double(norms.shadow_norm) << '\n';
        os << "MAP " << format_double(t) << ' ' << format_int(n) << ' '
           << format_double(norms.map_norm) << '\n';
    }
}

} // namespace drs
