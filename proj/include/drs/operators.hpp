#pragma once

#include "drs/subspace.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace drs {

/// Dense square linear map. Immutable; compose/adjoint return new maps.
class LinearMap {
public:
    explicit LinearMap(Matrix m) : matrix_(std::move(m)) {
        detail::require(matrix_.rows() == matrix_.cols(), "LinearMap: matrix must be square");
        detail::require(matrix_.rows() >= 1, "LinearMap: dimension must be positive");
    }

    int dim() const { return static_cast<int>(matrix_.rows()); }
    const Matrix& matrix() const { return matrix_; }

    Vector apply(const Vector& x) const {
        detail::require(x.size() == matrix_.cols(), "LinearMap::apply: dimension mismatch");
        return matrix_ * x;
    }

    LinearMap compose(const LinearMap& inner) const {
        detail::require(dim() == inner.dim(), "LinearMap::compose: dimension mismatch");
        return LinearMap(matrix_ * inner.matrix_);
    }

    LinearMap adjoint() const { return LinearMap(matrix_.transpose()); }

    LinearMap subtract(const LinearMap& other) const {
        detail::require(dim() == other.dim(), "LinearMap::subtract: dimension mismatch");
        return LinearMap(matrix_ - other.matrix_);
    }

private:
    Matrix matrix_;
};

/// Spectral norm: largest singular value via a full singular decomposition.
inline double operator_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::BDCSVD<Matrix> svd(m);
    return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
}

inline double operator_norm(const LinearMap& a) { return operator_norm(a.matrix()); }

inline LinearMap identity_map(int dim) { return LinearMap(Matrix::Identity(dim, dim)); }

inline LinearMap projector(const Subspace& s) { return LinearMap(projector_matrix(s)); }

inline LinearMap reflector(const Subspace& s) {
    const int d = s.ambient_dim();
    return LinearMap(2.0 * projector_matrix(s) - Matrix::Identity(d, d));
}

namespace detail {

inline void require_pair(const Subspace& u, const Subspace& v, const char* where) {
    require(u.ambient_dim() == v.ambient_dim(), std::string(where) + ": dimension mismatch");
}

} // namespace detail

/// The splitting operator P_V(2P_U − I) + I − P_U as a dense matrix.
inline LinearMap dr_operator(const Subspace& u, const Subspace& v) {
    detail::require_pair(u, v, "dr_operator");
    const int d = u.ambient_dim();
    const Matrix pu = projector_matrix(u);
    const Matrix pv = projector_matrix(v);
    const Matrix id = Matrix::Identity(d, d);
    return LinearMap(pv * (2.0 * pu - id) + id - pu);
}

/// Adjoint of dr_operator(U, V); equals dr_operator(V, U) by construction.
inline LinearMap dr_adjoint(const Subspace& u, const Subspace& v) {
    detail::require_pair(u, v, "dr_adjoint");
    return dr_operator(v, u);
}

/// Alternating-projections composition P_V P_U.
inline LinearMap map_operator(const Subspace& u, const Subspace& v) {
    detail::require_pair(u, v, "map_operator");
    return LinearMap(projector_matrix(v) * projector_matrix(u));
}

/// Projector onto the fixed-point set of the splitting operator:
/// P_{U∩V} + P_{U⊥∩V⊥}. The two ranges are orthogonal, so the sum is again
/// an orthogonal projector.
inline LinearMap fix_projector(const Subspace& u, const Subspace& v) {
    detail::require_pair(u, v, "fix_projector");
    const Subspace both = intersect(u, v);
    const Subspace both_perp = intersect(complement(u), complement(v));
    return LinearMap(projector_matrix(both) + projector_matrix(both_perp));
}

struct IdentityCheck {
    std::string name;
    double residual; // spectral norm of LHS − RHS
};

using IdentityReport = std::vector<IdentityCheck>;

inline double max_residual(const IdentityReport& report) {
    double worst = 0.0;
    for (const auto& c : report) worst = std::max(worst, c.residual);
    return worst;
}

/// Residuals for the operator identity catalogue: the reflector/adjoint
/// relations, normality, the mean identity 2TT* = T + T*, the fixed-point
/// projector relations, and the power factorizations for n = 1..n_max.
inline IdentityReport verify_identities(const Subspace& u, const Subspace& v, int n_max) {
    detail::require_pair(u, v, "verify_identities");
    detail::require(n_max >= 1, "verify_identities: n_max must be at least 1");

    const int d = u.ambient_dim();
    const Matrix id = Matrix::Identity(d, d);
    const Matrix pu = projector_matrix(u);
    const Matrix pv = projector_matrix(v);
    const Matrix pup = id - pu;
    const Matrix pvp = id - pv;
    const Matrix ru = 2.0 * pu - id;
    const Matrix rv = 2.0 * pv - id;
    const Matrix t = dr_operator(u, v).matrix();
    const Matrix ts = t.transpose();
    const Matrix tts = t * ts;

    const Subspace cu = complement(u);
    const Subspace cv = complement(v);
    const Subspace both = intersect(u, v);
    const Subspace both_perp = intersect(cu, cv);
    const Matrix pf = projector_matrix(both) + projector_matrix(both_perp);
    const Matrix pi = projector_matrix(both);

    IdentityReport out;
    auto check = [&out](std::string name, const Matrix& lhs, const Matrix& rhs) {
        out.push_back({std::move(name), operator_norm(Matrix(lhs - rhs))});
    };

    check("T == PV PU + PVp PUp", t, pv * pu + pvp * pup);
    check("adjoint(T) == transpose(T)", dr_adjoint(u, v).matrix(), ts);
    check("T(U,V) == T(Up,Vp)", t, dr_operator(cu, cv).matrix());
    const Matrix sum_m_id = pu + pv - id;
    check("RU T* == PU + PV - I", ru * ts, sum_m_id);
    check("T RU == PU + PV - I", t * ru, sum_m_id);
    check("T* RV == PU + PV - I", ts * rv, sum_m_id);
    check("RV T == PU + PV - I", rv * t, sum_m_id);
    check("T RU symmetric", t * ru, Matrix((t * ru).transpose()));
    check("T* RV RU == T", ts * rv * ru, t);
    check("RV RU T* == T", rv * ru * ts, t);
    check("T RU RV == T*", t * ru * rv, ts);
    check("RU RV T == T*", ru * rv * t, ts);
    check("T T* == T* T", tts, ts * t);
    check("2 T T* == T + T*", 2.0 * tts, t + ts);
    check("T T* == PV PU PV + PVp PUp PVp", tts, pv * pu * pv + pvp * pup * pvp);
    check("T T* == PU PV PU + PUp PVp PUp", tts, pu * pv * pu + pup * pvp * pup);
    check("PFix idempotent", pf * pf, pf);
    check("PFix symmetric", pf, Matrix(pf.transpose()));
    check("T PFix == PFix", t * pf, pf);
    check("PFix T == PFix", pf * t, pf);
    check("PU PFix == Pcap", pu * pf, pi);
    check("PV PFix == Pcap", pv * pf, pi);

    // rank(PFix) read off the trace (exact for an orthogonal projector).
    const long rank = std::lround(pf.trace());
    const long expected = both.dim() + both_perp.dim();
    out.push_back({"rank(PFix) == dim(UcapV) + dim(UpcapVp)",
                   static_cast<double>(std::labs(rank - expected))});

    // Power factorizations, n = 1..n_max.
    Matrix tts_n = tts;                 // (T T*)^n
    Matrix pupv_n = pu * pv;            // (PU PV)^n
    Matrix pvpu_n = pv * pu;            // (PV PU)^n
    Matrix puppvp_n = pup * pvp;        // (PUp PVp)^n
    Matrix pvppup_n = pvp * pup;        // (PVp PUp)^n
    Matrix pupvpu_n = pu * pv * pu;     // (PU PV PU)^n
    Matrix puppvppup_n = pup * pvp * pup;
    Matrix rvru_n = rv * ru;            // (RV RU)^n
    Matrix t_2n = t * t;                // T^(2n)

    for (int n = 1; n <= n_max; ++n) {
        const std::string tag = " [n=" + std::to_string(n) + "]";
        check("PU (T T*)^n == (PU PV)^n PU" + tag, pu * tts_n, pupv_n * pu);
        check("(T T*)^n == (PU PV PU)^n + (PUp PVp PUp)^n" + tag, tts_n, pupvpu_n + puppvppup_n);
        check("T^(2n) == (T T*)^n (RV RU)^n" + tag, t_2n, tts_n * rvru_n);
        check("T^(2n) == ((PU PV)^n PU + (PUp PVp)^n PUp) (RV RU)^n" + tag, t_2n,
              (pupv_n * pu + puppvp_n * pup) * rvru_n);
        check("T^(2n+1) == (T T*)^n T (RV RU)^n" + tag, Matrix(t_2n * t), tts_n * t * rvru_n);
        check("T^(2n+1) == ((PU PV)^(n+1) + (PUp PVp)^(n+1)) (RV RU)^(n+1)" + tag, Matrix(t_2n * t),
              (pupv_n * pu * pv + puppvp_n * pup * pvp) * rvru_n * rv * ru);
        check("T^(2n+1) == ((PV PU)^(n+1) + (PVp PUp)^(n+1)) (RV RU)^n" + tag, Matrix(t_2n * t),
              (pvpu_n * pv * pu + pvppup_n * pvp * pup) * rvru_n);

        if (n == n_max) break;
        tts_n *= tts;
        pupv_n = pupv_n * pu * pv;
        pvpu_n = pvpu_n * pv * pu;
        puppvp_n = puppvp_n * pup * pvp;
        pvppup_n = pvppup_n * pvp * pup;
        pupvpu_n = pupvpu_n * pu * pv * pu;
        puppvppup_n = puppvppup_n * pup * pvp * pup;
        rvru_n = rvru_n * rv * ru;
        t_2n = t_2n * t * t;
    }
    return out;
}

} // namespace drs
