#pragma once

#include "drs/subspace.hpp"
#include "drs/text_format.hpp"
#include "drs/two_lines.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace drs {

/// Finite truncation of the block-diagonal two-lines construction: block k
/// of R^{2M} carries the horizontal axis against the line at angle θ_k. As
/// the angles approach 0 the Friedrichs cosine approaches 1 and no linear
/// rate survives — this module produces the certificates showing that.
struct BlockModel {
    std::vector<double> angles; // θ_0..θ_{M−1}, each in (0, π/2)

    explicit BlockModel(std::vector<double> thetas) : angles(std::move(thetas)) {
        detail::require(!angles.empty(), "BlockModel: need at least one block");
        for (double t : angles)
            detail::require(t > 0.0 && t < kPi / 2.0,
                            "BlockModel: angles must lie strictly inside (0, pi/2)");
    }

    // θ₀ = π/3, θ_n = π/(4n) for n ≥ 1.
    static BlockModel canonical(int m) {
        detail::require(m >= 1, "BlockModel::canonical: M must be at least 1");
        std::vector<double> thetas(static_cast<std::size_t>(m));
        thetas[0] = kPi / 3.0;
        for (int n = 1; n < m; ++n) thetas[static_cast<std::size_t>(n)] = kPi / (4.0 * n);
        return BlockModel(std::move(thetas));
    }

    bool is_canonical() const {
        if (std::abs(angles[0] - kPi / 3.0) > 1e-15) return false;
        for (std::size_t n = 1; n < angles.size(); ++n)
            if (std::abs(angles[n] - kPi / (4.0 * static_cast<double>(n))) > 1e-15) return false;
        return true;
    }

    int truncation() const { return static_cast<int>(angles.size()); }
    int ambient_dim() const { return 2 * truncation(); }

    std::vector<double> cosines() const {
        std::vector<double> c(angles.size());
        for (std::size_t i = 0; i < angles.size(); ++i) c[i] = std::cos(angles[i]);
        return c;
    }

    double friedrichs_cos() const {
        double best = 0.0;
        for (double t : angles) best = std::max(best, std::cos(t));
        return best;
    }
};

/// Start point with coordinates x_j = 1/(j+1), length 2M.
inline Vector canonical_start(int m) {
    detail::require(m >= 1, "canonical_start: M must be at least 1");
    Vector x(2 * m);
    for (int j = 0; j < 2 * m; ++j) x(j) = 1.0 / static_cast<double>(j + 1);
    return x;
}

/// Materialize the truncated pair (U, V) in R^{2M}: U takes the first axis
/// of every block, V the rotated line of that block.
inline std::pair<Subspace, Subspace> build_truncated(const BlockModel& model) {
    const int m = model.truncation();
    const int d = 2 * m;
    Matrix bu = Matrix::Zero(d, m);
    Matrix bv = Matrix::Zero(d, m);
    for (int k = 0; k < m; ++k) {
        bu(2 * k, k) = 1.0;
        bv(2 * k, k) = std::cos(model.angles[static_cast<std::size_t>(k)]);
        bv(2 * k + 1, k) = std::sin(model.angles[static_cast<std::size_t>(k)]);
    }
    return {Subspace(d, std::move(bu)), Subspace(d, std::move(bv))};
}

/// ‖Tⁿx‖ for n = 0..n_max via the per-block closed form
/// ‖block_k(Tⁿx)‖ = cosⁿθ_k ‖(x_{2k}, x_{2k+1})‖. No dense matrices, so
/// truncations of 10⁵ blocks stay cheap.
inline std::vector<double> dr_norm_sequence(const BlockModel& model, const Vector& x0, long n_max) {
    detail::require(x0.size() == model.ambient_dim(), "dr_norm_sequence: dimension mismatch");
    detail::require(n_max >= 0, "dr_norm_sequence: n_max must be nonnegative");
    const std::vector<double> cos_k = model.cosines();
    const int m = model.truncation();

    std::vector<double> block_scaled(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k)
        block_scaled[static_cast<std::size_t>(k)] =
            std::hypot(x0(2 * k), x0(2 * k + 1)); // c_kⁿ‖block‖, updated in place

    std::vector<double> norms;
    norms.reserve(static_cast<std::size_t>(n_max) + 1);
    for (long n = 0;; ++n) {
        double sumsq = 0.0;
        for (double b : block_scaled) sumsq += b * b;
        norms.push_back(std::sqrt(sumsq));
        if (n == n_max) break;
        for (int k = 0; k < m; ++k) block_scaled[static_cast<std::size_t>(k)] *= cos_k[static_cast<std::size_t>(k)];
    }
    return norms;
}

struct GrowthRow {
    long n;
    double measured; // γ⁻ⁿ‖Tⁿx‖ or γ⁻ⁿ‖P_U Tⁿx‖
    double bound;    // analytic lower bound; 0 on rows where none applies
};

struct GrowthTable {
    std::vector<GrowthRow> rows;
    int witness_index = -1; // block index N backing the bound
    double delta = 0.0;     // growth factor of the bound (> 1)

    bool crosses(double threshold) const {
        for (const auto& r : rows)
            if (r.measured > threshold) return true;
        return false;
    }
};

/// Raised when no block can witness super-γ growth at this truncation.
class CertificateError : public std::runtime_error {
public:
    CertificateError(double gamma, double max_cosine, long smallest_usable_m)
        : std::runtime_error("sublinearity certificate impossible: gamma=" + format_double(gamma) +
                             " >= largest usable block cosine " + format_double(max_cosine) +
                             "; smallest usable truncation M=" + format_int(smallest_usable_m) +
                             " (canonical angle family)"),
          gamma(gamma), max_cosine(max_cosine), smallest_usable_m(smallest_usable_m) {}

    double gamma;
    double max_cosine;
    long smallest_usable_m;
};

namespace detail {

// Smallest M whose canonical angle family contains a block with cos θ > γ:
// cos(π/(4n)) > γ at n = ceil(π / (4 arccos γ)), usable once M > n.
inline long canonical_smallest_usable_m(double gamma) {
    if (gamma < 0.5) return 1; // block 0 (θ = π/3) already works
    const double n = kPi / (4.0 * std::acos(gamma));
    return static_cast<long>(std::floor(n)) + 2; // first index strictly past n, plus 1 for size
}

// exp(n·log(1/γ) + log(value)) without intermediate overflow.
inline double scaled(double log_inv_gamma, long n, double value) {
    if (value <= 0.0) return 0.0;
    const double lg = static_cast<double>(n) * log_inv_gamma + std::log(value);
    if (lg > 700.0) return std::numeric_limits<double>::infinity();
    return std::exp(lg);
}

} // namespace detail

/// Growth table for γ⁻ⁿ‖Tⁿx₀‖, n = 0..n_max, with the per-row lower bound
/// γ⁻ⁿ c_Nⁿ ‖(x_{2N}, x_{2N+1})‖ from the witnessing block N (the block of
/// largest cosine among those with c > γ and a nonzero start block). The
/// table diverging shows the orbit cannot converge linearly with rate γ.
inline GrowthTable sublinearity_certificate(const BlockModel& model, const Vector& x0,
                                            double gamma, long n_max) {
    detail::require(gamma > 0.0 && gamma < 1.0, "sublinearity_certificate: gamma must lie in (0,1)");
    detail::require(x0.size() == model.ambient_dim(), "sublinearity_certificate: dimension mismatch");
    detail::require(n_max >= 1, "sublinearity_certificate: n_max must be at least 1");

    const std::vector<double> cos_k = model.cosines();
    int witness = -1;
    double witness_cos = 0.0;
    double witness_block_norm = 0.0;
    double max_usable_cos = 0.0;
    for (int k = 0; k < model.truncation(); ++k) {
        const double bnorm = std::hypot(x0(2 * k), x0(2 * k + 1));
        if (bnorm == 0.0) continue;
        const double c = cos_k[static_cast<std::size_t>(k)];
        max_usable_cos = std::max(max_usable_cos, c);
        if (c > gamma && c > witness_cos) {
            witness = k;
            witness_cos = c;
            witness_block_norm = bnorm;
        }
    }
    if (witness < 0)
        throw CertificateError(gamma, max_usable_cos, detail::canonical_smallest_usable_m(gamma));

    const double log_inv_gamma = -std::log(gamma);
    const std::vector<double> norms = dr_norm_sequence(model, x0, n_max);

    GrowthTable table;
    table.witness_index = witness;
    table.delta = witness_cos / gamma;
    table.rows.reserve(static_cast<std::size_t>(n_max) + 1);
    for (long n = 0; n <= n_max; ++n) {
        GrowthRow row;
        row.n = n;
        row.measured = detail::scaled(log_inv_gamma, n, norms[static_cast<std::size_t>(n)]);
        row.bound = detail::scaled(log_inv_gamma, n,
                                   std::pow(witness_cos, static_cast<double>(n)) * witness_block_norm);
        table.rows.push_back(row);
    }
    return table;
}

/// Growth table for γ⁻ⁿ‖P_U Tⁿx‖ on the canonical instance, with the
/// diagonal lower bound δⁿ/(2^{3/2}(n+1)(2n+1)) active from the first index
/// N where every later block satisfies cos θ_n / γ ≥ δ > 1. Requires the
/// truncation to cover every tabulated index (M ≥ n_max).
inline GrowthTable shadow_sublinearity(const BlockModel& model, double gamma, long n_max) {
    detail::require(gamma > 0.0 && gamma < 1.0, "shadow_sublinearity: gamma must lie in (0,1)");
    detail::require(n_max >= 1, "shadow_sublinearity: n_max must be at least 1");
    detail::require(model.is_canonical(),
                    "shadow_sublinearity: model must carry the canonical angles");
    detail::require(model.truncation() >= n_max,
                    "shadow_sublinearity: truncation M must cover n_max blocks");

    const int m = model.truncation();
    const Vector x = canonical_start(m);
    const std::vector<double> cos_k = model.cosines();

    // First N with min_{k ≥ N} c_k > γ; δ = that minimum over γ.
    std::vector<double> suffix_min(cos_k.size());
    double running = 1.0;
    for (int k = m - 1; k >= 0; --k) {
        running = std::min(running, cos_k[static_cast<std::size_t>(k)]);
        suffix_min[static_cast<std::size_t>(k)] = running;
    }
    int first_witness = -1;
    for (int k = 0; k < m; ++k) {
        if (suffix_min[static_cast<std::size_t>(k)] > gamma) {
            first_witness = k;
            break;
        }
    }
    if (first_witness < 0)
        throw CertificateError(gamma, suffix_min.empty() ? 0.0 : suffix_min[0],
                               detail::canonical_smallest_usable_m(gamma));
    const double delta = suffix_min[static_cast<std::size_t>(first_witness)] / gamma;

    const double log_inv_gamma = -std::log(gamma);
    GrowthTable table;
    table.witness_index = first_witness;
    table.delta = delta;
    table.rows.reserve(static_cast<std::size_t>(n_max) + 1);

    // Incrementally maintained c_kⁿ; shadow component of block k is
    // c_kⁿ (cos(nθ_k) x_{2k} − sin(nθ_k) x_{2k+1}).
    std::vector<double> pow_c(cos_k.size(), 1.0);
    for (long n = 0; n <= n_max; ++n) {
        double sumsq = 0.0;
        for (int k = 0; k < m; ++k) {
            const double arg = static_cast<double>(n) * model.angles[static_cast<std::size_t>(k)];
            const double comp = pow_c[static_cast<std::size_t>(k)] *
                                (std::cos(arg) * x(2 * k) - std::sin(arg) * x(2 * k + 1));
            sumsq += comp * comp;
        }
        GrowthRow row;
        row.n = n;
        row.measured = detail::scaled(log_inv_gamma, n, std::sqrt(sumsq));
        row.bound = n >= first_witness
                        ? std::pow(delta, static_cast<double>(n)) /
                              (2.828427124746190097603377448419 * static_cast<double>(n + 1) *
                               static_cast<double>(2 * n + 1))
                        : 0.0;
        table.rows.push_back(row);
        if (n == n_max) break;
        for (int k = 0; k < m; ++k) pow_c[static_cast<std::size_t>(k)] *= cos_k[static_cast<std::size_t>(k)];
    }
    return table;
}

/// Growth tables are emitted as columnar text: "# n measured bound".
inline void write_growth_table(std::ostream& os, const GrowthTable& table) {
    os << "# n measured bound\n";
    for (const auto& r : table.rows)
        os << format_int(r.n) << ' ' << format_double(r.measured) << ' '
           << format_double(r.bound) << '\n';
}

} // namespace drs
