#include "drs/subspace.hpp"

#include "oracle_helpers.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace drs;
using drs::testing::pair_with_known_intersection;
using drs::testing::random_subspace;
using drs::testing::random_vector;
using drs::testing::row_reduction_rank;
using drs::testing::spectral_norm_oracle;

namespace {

constexpr double kPiT = 3.14159265358979323846;

Vector vec2(double a, double b) {
    Vector v(2);
    v << a, b;
    return v;
}

// ‖P_A − P_B‖ as a span-equality measure.
double projector_gap(const Subspace& a, const Subspace& b) {
    return spectral_norm_oracle(projector_matrix(a) - projector_matrix(b));
}

} // namespace

TEST(Orthonormalize, CollinearInputCollapsesToOneDimension) {
    const Subspace s = orthonormalize({vec2(1, 0), vec2(2, 0)}, 2);
    EXPECT_EQ(s.dim(), 1);
    EXPECT_NEAR(s.basis()(0, 0), 1.0, 1e-15);
    EXPECT_NEAR(s.basis()(1, 0), 0.0, 1e-15);
}

TEST(Orthonormalize, EmptySpanIsTrivialSubspace) {
    const Subspace s = orthonormalize({}, 3);
    EXPECT_EQ(s.dim(), 0);
    EXPECT_EQ(s.ambient_dim(), 3);
}

TEST(Orthonormalize, RankMatchesRowReductionOracle) {
    Vector a(3), b(3), c(3);
    a << 1, 1, 0;
    b << 0, 1, 1;
    c << 1, 0, -1;
    Matrix m(3, 3);
    m << a, b, c;
    const int oracle_rank = row_reduction_rank(m);
    EXPECT_EQ(oracle_rank, 2); // third vector is dependent

    const Subspace s = orthonormalize({a, b, c}, 3);
    EXPECT_EQ(s.dim(), oracle_rank);
    // every input vector lies in the span
    EXPECT_NEAR(distance_to(s, a), 0.0, 1e-12);
    EXPECT_NEAR(distance_to(s, b), 0.0, 1e-12);
    EXPECT_NEAR(distance_to(s, c), 0.0, 1e-12);
}

TEST(Orthonormalize, ReorthonormalizationIsIdempotent) {
    Xoshiro256pp rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const Subspace s = random_subspace(7, 3, rng);
        const Subspace again = orthonormalize(s.basis());
        EXPECT_EQ(again.dim(), s.dim());
        EXPECT_LE(projector_gap(s, again), kOrthoTol);
        const Matrix gram = again.basis().transpose() * again.basis();
        EXPECT_LE((gram - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff(), kOrthoTol);
    }
}

TEST(Orthonormalize, RejectsMismatchedVectorLengths) {
    Vector a(2), b(3);
    a.setZero();
    b.setZero();
    EXPECT_THROW(orthonormalize({a, b}, 2), std::invalid_argument);
}

TEST(Subspace, RejectsDegenerateConstruction) {
    EXPECT_THROW(Subspace(0, Matrix(0, 0)), std::invalid_argument);
    Matrix skew(2, 2);
    skew << 1, 1, 0, 1; // not orthonormal
    EXPECT_THROW(Subspace(2, skew), std::invalid_argument);
    Matrix wrong_rows(3, 1);
    wrong_rows << 1, 0, 0;
    EXPECT_THROW(Subspace(2, wrong_rows), std::invalid_argument);
}

TEST(Project, AxisLine) {
    const Subspace s = orthonormalize({vec2(1, 0)}, 2);
    const Vector p = project(s, vec2(3, 4));
    EXPECT_NEAR(p(0), 3.0, 1e-15);
    EXPECT_NEAR(p(1), 0.0, 1e-15);
}

TEST(Project, TrivialSubspaceMapsToZero) {
    const Subspace s = Subspace::zero(4);
    Xoshiro256pp rng(3);
    const Vector x = random_vector(4, rng);
    EXPECT_NEAR(project(s, x).norm(), 0.0, 0.0);
}

TEST(Project, LineAtSixtyDegrees) {
    // line at π/3; image of e0 evaluated from the projector entries
    // cos²θ = 1/4 and sinθcosθ = √3/4.
    const Subspace s = orthonormalize({vec2(std::cos(kPiT / 3), std::sin(kPiT / 3))}, 2);
    const Vector p = project(s, vec2(1, 0));
    EXPECT_NEAR(p(0), 0.25, 1e-15);
    EXPECT_NEAR(p(1), std::sqrt(3.0) / 4.0, 1e-15);
}

TEST(Project, IdempotentAndOrthogonalResidual) {
    Xoshiro256pp rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        const int d = 6;
        const Subspace s = random_subspace(d, static_cast<int>(rng.int_in(0, d)), rng);
        const Vector x = random_vector(d, rng);
        const Vector p = project(s, x);
        EXPECT_LE((project(s, p) - p).norm(), 1e-12);
        for (int j = 0; j < s.dim(); ++j)
            EXPECT_LE(std::abs((x - p).dot(s.basis().col(j))), 1e-12);
    }
}

TEST(Project, DimensionMismatchThrows) {
    const Subspace s = Subspace::full(3);
    EXPECT_THROW(project(s, vec2(1, 2)), std::invalid_argument);
}

TEST(Reflect, MirrorsAcrossAxis) {
    const Subspace s = orthonormalize({vec2(1, 0)}, 2);
    const Vector r = reflect(s, vec2(3, 4));
    EXPECT_NEAR(r(0), 3.0, 1e-15);
    EXPECT_NEAR(r(1), -4.0, 1e-15);
}

TEST(Reflect, FullSpaceIsIdentityAndZeroIsNegation) {
    Xoshiro256pp rng(5);
    const Vector x = random_vector(5, rng);
    EXPECT_LE((reflect(Subspace::full(5), x) - x).norm(), 1e-14);
    EXPECT_LE((reflect(Subspace::zero(5), x) + x).norm(), 1e-14);
}

TEST(Reflect, IsometricAndInvolutive) {
    Xoshiro256pp rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        const int d = 8;
        const Subspace s = random_subspace(d, static_cast<int>(rng.int_in(0, d)), rng);
        const Vector x = random_vector(d, rng);
        EXPECT_NEAR(reflect(s, x).norm(), x.norm(), 1e-12);
        EXPECT_LE((reflect(s, reflect(s, x)) - x).norm(), 1e-12);
    }
}

TEST(Complement, AxisLineInPlane) {
    const Subspace s = orthonormalize({vec2(1, 0)}, 2);
    const Subspace c = complement(s);
    EXPECT_EQ(c.dim(), 1);
    EXPECT_NEAR(std::abs(c.basis()(1, 0)), 1.0, 1e-15);
}

TEST(Complement, TrivialSubspaceGivesFullSpace) {
    const Subspace c = complement(Subspace::zero(3));
    EXPECT_EQ(c.dim(), 3);
}

TEST(Complement, ProjectorsSumToIdentity) {
    Xoshiro256pp rng(29);
    const Subspace s = random_subspace(5, 2, rng);
    const Subspace c = complement(s);
    EXPECT_EQ(c.dim(), 3);
    const Matrix sum = projector_matrix(s) + projector_matrix(c);
    EXPECT_LE((sum - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-12);
    // double complement spans the original
    EXPECT_LE(projector_gap(complement(c), s), 1e-12);
    // columns pairwise orthogonal across the two bases
    EXPECT_LE((s.basis().transpose() * c.basis()).cwiseAbs().maxCoeff(), kOrthoTol);
}

TEST(Intersect, DistinctLinesMeetOnlyAtOrigin) {
    const Subspace u = orthonormalize({vec2(1, 0)}, 2);
    const Subspace v = orthonormalize({vec2(std::cos(0.7), std::sin(0.7))}, 2);
    EXPECT_EQ(intersect(u, v).dim(), 0);
}

TEST(Intersect, EqualSubspacesIntersectToThemselves) {
    Xoshiro256pp rng(31);
    const Subspace u = random_subspace(6, 3, rng);
    const Subspace w = intersect(u, u);
    EXPECT_EQ(w.dim(), 3);
    EXPECT_LE(projector_gap(w, u), 1e-12);
}

TEST(Intersect, CoordinateSubspaces) {
    Matrix bu = Matrix::Zero(4, 2), bv = Matrix::Zero(4, 2);
    bu(0, 0) = 1;
    bu(1, 1) = 1; // span{e0, e1}
    bv(1, 0) = 1;
    bv(2, 1) = 1; // span{e1, e2}
    const Subspace w = intersect(Subspace(4, bu), Subspace(4, bv));
    ASSERT_EQ(w.dim(), 1);
    EXPECT_NEAR(std::abs(w.basis()(1, 0)), 1.0, 1e-12);
}

TEST(Intersect, MembersLieInBothSubspaces) {
    Xoshiro256pp rng(37);
    for (int trial = 0; trial < 10; ++trial) {
        const auto pair = pair_with_known_intersection(8, 2, 2, 3, rng);
        const Subspace w = intersect(pair.u, pair.v);
        ASSERT_EQ(w.dim(), 2);
        for (int j = 0; j < w.dim(); ++j) {
            const Vector col = w.basis().col(j);
            EXPECT_LE(distance_to(pair.u, col) / col.norm(), 1e-10);
            EXPECT_LE(distance_to(pair.v, col) / col.norm(), 1e-10);
        }
        // and w spans the generator used to build the pair
        const Subspace generated = orthonormalize(pair.shared);
        EXPECT_LE(projector_gap(w, generated), 1e-9);
    }
}

TEST(PrincipalAngles, TwoLinesGiveTheLineAngle) {
    const double theta = kPiT / 17.0;
    const Subspace u = orthonormalize({vec2(1, 0)}, 2);
    const Subspace v = orthonormalize({vec2(std::cos(theta), std::sin(theta))}, 2);
    const AngleSpectrum spec = principal_angles(u, v);
    EXPECT_EQ(spec.intersection_dim, 0);
    EXPECT_NEAR(spec.friedrichs_cos, std::cos(theta), 1e-15);
}

TEST(PrincipalAngles, NestedSubspaceHasZeroFriedrichsCos) {
    Xoshiro256pp rng(41);
    const Subspace v = random_subspace(6, 4, rng);
    const Subspace u = orthonormalize(v.basis().leftCols(2)); // U ⊊ V
    const AngleSpectrum spec = principal_angles(u, v);
    EXPECT_EQ(spec.intersection_dim, 2);
    EXPECT_NEAR(spec.friedrichs_cos, 0.0, 1e-12);
}

TEST(PrincipalAngles, MatchesProjectorProductOracle) {
    Xoshiro256pp rng(43);
    for (int trial = 0; trial < 10; ++trial) {
        const auto pair = pair_with_known_intersection(6, 1, 2, 2, rng);
        const AngleSpectrum spec = principal_angles(pair.u, pair.v);
        ASSERT_EQ(spec.intersection_dim, 1);
        // Oracle: ‖P_V P_U − P_{U∩V}‖ with the intersection projector built
        // from the known generator, not from drs::intersect.
        const Matrix p_cap = pair.shared * pair.shared.transpose();
        const double oracle = spectral_norm_oracle(
            projector_matrix(pair.v) * projector_matrix(pair.u) - p_cap);
        EXPECT_NEAR(spec.friedrichs_cos, oracle, 1e-10);
    }
}

TEST(PrincipalAngles, SymmetricAndComplementInvariant) {
    Xoshiro256pp rng(47);
    for (int trial = 0; trial < 10; ++trial) {
        const auto pair = pair_with_known_intersection(7, 1, 2, 3, rng);
        const double cf = principal_angles(pair.u, pair.v).friedrichs_cos;
        EXPECT_NEAR(cf, principal_angles(pair.v, pair.u).friedrichs_cos, 1e-12);
        EXPECT_NEAR(cf, principal_angles(complement(pair.u), complement(pair.v)).friedrichs_cos,
                    1e-10);
    }
}

TEST(PrincipalAngles, IntersectionDecisionBoundary) {
    // a principal cosine above 1 - kAngleOneTol counts as intersection, one
    // below does not; probe both sides of the threshold with exact pairs
    auto pair_at_gap = [](double gap) {
        const double alpha = std::acos(1.0 - gap);
        Matrix bu = Matrix::Zero(3, 2), bv = Matrix::Zero(3, 2);
        bu(0, 0) = 1;
        bu(1, 1) = 1; // span{e0, e1}
        bv(0, 0) = 1; // e0 shared exactly
        bv(1, 1) = std::cos(alpha);
        bv(2, 1) = std::sin(alpha);
        return std::pair<Subspace, Subspace>{Subspace(3, bu), Subspace(3, bv)};
    };

    const auto [u_in, v_in] = pair_at_gap(5e-9); // closer than the tolerance
    const AngleSpectrum inside = principal_angles(u_in, v_in);
    EXPECT_EQ(inside.intersection_dim, 2);
    EXPECT_EQ(inside.friedrichs_cos, 0.0);
    EXPECT_EQ(intersect(u_in, v_in).dim(), 2);

    const auto [u_out, v_out] = pair_at_gap(2e-8); // farther than the tolerance
    const AngleSpectrum outside = principal_angles(u_out, v_out);
    EXPECT_EQ(outside.intersection_dim, 1);
    EXPECT_NEAR(outside.friedrichs_cos, 1.0 - 2e-8, 1e-12);
    EXPECT_LE(outside.friedrichs_cos, 1.0 - kAngleOneTol);
    EXPECT_EQ(intersect(u_out, v_out).dim(), 1);
}

TEST(PrincipalAngles, CosinesStayBelowOneAfterIntersectionRemoval) {
    Xoshiro256pp rng(53);
    for (int trial = 0; trial < 20; ++trial) {
        const auto pair = pair_with_known_intersection(9, 2, 3, 2, rng);
        const AngleSpectrum spec = principal_angles(pair.u, pair.v);
        EXPECT_LE(spec.friedrichs_cos, 1.0 - kAngleOneTol);
        for (std::size_t i = 1; i < spec.cosines.size(); ++i)
            EXPECT_GE(spec.cosines[i - 1], spec.cosines[i]); // non-increasing
    }
}

TEST(NestedProjection, ProductCollapsesToIntersection) {
    // U ⊆ V forces P_V P_U = P_U P_V = P_{U∩V} = P_U.
    Xoshiro256pp rng(59);
    const Subspace v = random_subspace(8, 5, rng);
    const Subspace u = orthonormalize(v.basis().leftCols(2));
    const Subspace cap = intersect(u, v);
    for (int trial = 0; trial < 20; ++trial) {
        const Vector x = random_vector(8, rng);
        const Vector via_v = project(v, project(u, x));
        EXPECT_LE((via_v - project(cap, x)).norm(), 1e-12);
        EXPECT_LE((via_v - project(u, x)).norm(), 1e-12);
    }
}

TEST(DistanceTo, PointOffAxis) {
    const Subspace s = orthonormalize({vec2(1, 0)}, 2);
    EXPECT_NEAR(distance_to(s, vec2(3, 4)), 4.0, 1e-15);
}

TEST(DistanceTo, MemberHasZeroDistance) {
    Xoshiro256pp rng(61);
    const Subspace s = random_subspace(5, 2, rng);
    const Vector x = s.basis() * vec2(1.5, -2.0);
    EXPECT_NEAR(distance_to(s, x), 0.0, 1e-13);
}

TEST(DistanceTo, AffineLine) {
    Vector anchor(2);
    anchor << 1, 1;
    const AffineSubspace line(anchor, orthonormalize({vec2(1, 0)}, 2));
    Vector origin = Vector::Zero(2);
    EXPECT_NEAR(distance_to(line, origin), 1.0, 1e-15);
}

TEST(AffineSubspace, AnchorLengthValidated) {
    Vector bad(3);
    bad.setZero();
    EXPECT_THROW(AffineSubspace(bad, Subspace::full(2)), std::invalid_argument);
}
