#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace drs {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Tolerance for accepting a basis matrix as orthonormal (max entry of QᵀQ − I).
inline constexpr double kOrthoTol = 1e-10;
// A principal cosine at least 1 − kAngleOneTol counts as 1, i.e. the
// corresponding direction belongs to the intersection.
inline constexpr double kAngleOneTol = 1e-8;

namespace detail {

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

// Flip column signs so the entry of largest magnitude is positive. Purely
// cosmetic normalization; makes orthonormalization reproducible and keeps
// axis-aligned inputs recognizable.
inline void canonicalize_signs(Matrix& q) {
    for (Eigen::Index j = 0; j < q.cols(); ++j) {
        Eigen::Index imax = 0;
        q.col(j).cwiseAbs().maxCoeff(&imax);
        if (q(imax, j) < 0.0) q.col(j) = -q.col(j);
    }
}

} // namespace detail

/// A linear subspace of R^d held as a d×k matrix with orthonormal columns.
/// k = 0 encodes the trivial subspace {0}. Immutable after construction.
class Subspace {
public:
    Subspace(int ambient_dim, Matrix basis)
        : ambient_dim_(ambient_dim), basis_(std::move(basis)) {
        detail::require(ambient_dim_ >= 1, "Subspace: ambient dimension must be positive");
        detail::require(basis_.rows() == ambient_dim_,
                        "Subspace: basis has " + std::to_string(basis_.rows()) +
                            " rows, ambient dimension is " + std::to_string(ambient_dim_));
        detail::require(basis_.cols() <= ambient_dim_, "Subspace: more basis vectors than ambient dimension");
        if (basis_.cols() > 0) {
            const Matrix gram = basis_.transpose() * basis_;
            const double dev = (gram - Matrix::Identity(basis_.cols(), basis_.cols())).cwiseAbs().maxCoeff();
            detail::require(dev <= kOrthoTol, "Subspace: basis columns are not orthonormal");
        }
    }

    static Subspace zero(int ambient_dim) { return Subspace(ambient_dim, Matrix(ambient_dim, 0)); }
    static Subspace full(int ambient_dim) {
        return Subspace(ambient_dim, Matrix::Identity(ambient_dim, ambient_dim));
    }

    int ambient_dim() const { return ambient_dim_; }
    int dim() const { return static_cast<int>(basis_.cols()); }
    const Matrix& basis() const { return basis_; }

private:
    int ambient_dim_;
    Matrix basis_; // d×k, orthonormal columns
};

/// Affine subspace anchor + direction. The anchor is any point of the set.
struct AffineSubspace {
    Vector anchor;
    Subspace direction;

    AffineSubspace(Vector a, Subspace dir) : anchor(std::move(a)), direction(std::move(dir)) {
        detail::require(anchor.size() == direction.ambient_dim(),
                        "AffineSubspace: anchor length must equal ambient dimension");
    }
};

/// Principal-angle cosines between two subspaces, non-increasing, clamped to
/// [0,1]. The leading run of cosines within kAngleOneTol of 1 spans the
/// intersection; friedrichs_cos is the first cosine after that run (0 when
/// none remains).
struct AngleSpectrum {
    std::vector<double> cosines;
    int intersection_dim = 0;
    double friedrichs_cos = 0.0;
};

/// Orthonormal basis for the span of `columns` (d×m, any m ≥ 0), produced by
/// column-pivoted Householder QR. Rank is decided by
/// |R(i,i)| > d · eps · |R(0,0)|, where |R(0,0)| is the largest column norm.
inline Subspace orthonormalize(const Matrix& columns) {
    const int d = static_cast<int>(columns.rows());
    detail::require(d >= 1, "orthonormalize: ambient dimension must be positive");
    if (columns.cols() == 0) return Subspace::zero(d);

    Eigen::ColPivHouseholderQR<Matrix> qr(columns);
    const Matrix& r = qr.matrixR();
    const double pivot0 = std::abs(r(0, 0));
    const double rank_tol = static_cast<double>(d) * std::numeric_limits<double>::epsilon() * pivot0;
    int rank = 0;
    const Eigen::Index diag = std::min(r.rows(), r.cols());
    for (Eigen::Index i = 0; i < diag; ++i) {
        if (std::abs(r(i, i)) > rank_tol) ++rank;
    }
    if (rank == 0) return Subspace::zero(d);

    Matrix q = qr.householderQ() * Matrix::Identity(d, rank);
    detail::canonicalize_signs(q);
    return Subspace(d, std::move(q));
}

inline Subspace orthonormalize(const std::vector<Vector>& spanning, int ambient_dim) {
    detail::require(ambient_dim >= 1, "orthonormalize: ambient dimension must be positive");
    Matrix a(ambient_dim, static_cast<Eigen::Index>(spanning.size()));
    for (std::size_t j = 0; j < spanning.size(); ++j) {
        detail::require(spanning[j].size() == ambient_dim,
                        "orthonormalize: vector " + std::to_string(j) + " has wrong length");
        a.col(static_cast<Eigen::Index>(j)) = spanning[j];
    }
    return orthonormalize(a);
}

inline void check_dims(const Subspace& s, const Vector& x, const char* where) {
    detail::require(x.size() == s.ambient_dim(), std::string(where) + ": dimension mismatch");
}

/// Nearest point of S to x, Q(Qᵀx).
inline Vector project(const Subspace& s, const Vector& x) {
    check_dims(s, x, "project");
    if (s.dim() == 0) return Vector::Zero(s.ambient_dim());
    return s.basis() * (s.basis().transpose() * x);
}

inline Vector project(const AffineSubspace& s, const Vector& x) {
    detail::require(x.size() == s.direction.ambient_dim(), "project: dimension mismatch");
    return s.anchor + project(s.direction, x - s.anchor);
}

/// Reflection across S: 2·project(S,x) − x. An involutive isometry.
inline Vector reflect(const Subspace& s, const Vector& x) {
    check_dims(s, x, "reflect");
    return 2.0 * project(s, x) - x;
}

inline double distance_to(const Subspace& s, const Vector& x) {
    check_dims(s, x, "distance_to");
    return (x - project(s, x)).norm();
}

inline double distance_to(const AffineSubspace& s, const Vector& x) {
    detail::require(x.size() == s.direction.ambient_dim(), "distance_to: dimension mismatch");
    return (x - project(s, x)).norm();
}

/// Orthogonal complement S⊥, dim d − k.
inline Subspace complement(const Subspace& s) {
    const int d = s.ambient_dim();
    const int k = s.dim();
    if (k == 0) return Subspace::full(d);
    if (k == d) return Subspace::zero(d);
    // Full Householder Q of the basis; trailing d−k columns span the complement.
    Eigen::HouseholderQR<Matrix> qr(s.basis());
    Matrix full = qr.householderQ() * Matrix::Identity(d, d);
    Matrix tail = full.rightCols(d - k);
    detail::canonicalize_signs(tail);
    return Subspace(d, std::move(tail));
}

namespace detail {

struct PrincipalDecomposition {
    Eigen::JacobiSVD<Matrix> svd; // of Q_Uᵀ Q_V
    std::vector<double> cosines;  // clamped to [0,1]
    int intersection_dim = 0;
};

inline PrincipalDecomposition principal_decomposition(const Subspace& u, const Subspace& v) {
    require(u.ambient_dim() == v.ambient_dim(), "principal_angles: dimension mismatch");
    PrincipalDecomposition out;
    if (u.dim() == 0 || v.dim() == 0) return out;
    out.svd.compute(u.basis().transpose() * v.basis(), Eigen::ComputeFullU);
    const auto& sv = out.svd.singularValues();
    out.cosines.resize(static_cast<std::size_t>(sv.size()));
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        // Rounding can put a cosine a hair above 1; clamp before interpreting.
        out.cosines[static_cast<std::size_t>(i)] = std::clamp(sv(i), 0.0, 1.0);
    }
    for (double c : out.cosines) {
        if (c >= 1.0 - kAngleOneTol) ++out.intersection_dim;
        else break;
    }
    return out;
}

} // namespace detail

/// Principal-angle cosines of (U, V): singular values of Q_Uᵀ Q_V.
inline AngleSpectrum principal_angles(const Subspace& u, const Subspace& v) {
    auto dec = detail::principal_decomposition(u, v);
    AngleSpectrum spec;
    spec.cosines = std::move(dec.cosines);
    spec.intersection_dim = dec.intersection_dim;
    spec.friedrichs_cos = static_cast<std::size_t>(spec.intersection_dim) < spec.cosines.size()
                              ? spec.cosines[static_cast<std::size_t>(spec.intersection_dim)]
                              : 0.0;
    return spec;
}

inline double friedrichs_cos(const Subspace& u, const Subspace& v) {
    return principal_angles(u, v).friedrichs_cos;
}

/// Basis of U ∩ V from the principal vectors whose cosine counts as 1.
inline Subspace intersect(const Subspace& u, const Subspace& v) {
    detail::require(u.ambient_dim() == v.ambient_dim(), "intersect: dimension mismatch");
    auto dec = detail::principal_decomposition(u, v);
    if (dec.intersection_dim == 0) return Subspace::zero(u.ambient_dim());
    const Matrix w = dec.svd.matrixU().leftCols(dec.intersection_dim);
    return orthonormalize(u.basis() * w);
}

/// Dense projector Q Qᵀ. Exchanged with the operator layer as a plain matrix.
inline Matrix projector_matrix(const Subspace& s) {
    if (s.dim() == 0) return Matrix::Zero(s.ambient_dim(), s.ambient_dim());
    return s.basis() * s.basis().transpose();
}

} // namespace drs
