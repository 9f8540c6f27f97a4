#include "drs/ell2.hpp"

#include "drs/iteration.hpp"
#include "drs/operators.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace drs;

TEST(BlockModel, CanonicalAngles) {
    const BlockModel model = BlockModel::canonical(5);
    EXPECT_NEAR(model.angles[0], kPi / 3.0, 0.0);
    EXPECT_NEAR(model.angles[3], kPi / 12.0, 1e-15);
    EXPECT_TRUE(model.is_canonical());
    EXPECT_FALSE(BlockModel({0.3, 0.2}).is_canonical());
    EXPECT_THROW(BlockModel({0.0}), std::invalid_argument);
    EXPECT_THROW(BlockModel({kPi / 2.0}), std::invalid_argument);
}

TEST(BlockModel, FriedrichsCosineIsLargestBlockCosine) {
    const BlockModel model = BlockModel::canonical(50);
    // largest cosine sits at the last block, angle pi/196
    EXPECT_NEAR(model.friedrichs_cos(), std::cos(kPi / 196.0), 1e-15);
}

TEST(BuildTruncated, SingleBlockIsTheTwoLinesSetup) {
    const BlockModel model({kPi / 3.0});
    const auto [u, v] = build_truncated(model);
    EXPECT_EQ(u.ambient_dim(), 2);
    EXPECT_NEAR(friedrichs_cos(u, v), 0.5, 1e-14);
    const Matrix t = dr_operator(u, v).matrix();
    const Matrix expected = 0.5 * rotation(kPi / 3.0);
    EXPECT_LE((t - expected).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(BuildTruncated, SpectrumMatchesModel) {
    const BlockModel model = BlockModel::canonical(20);
    const auto [u, v] = build_truncated(model);
    const AngleSpectrum spec = principal_angles(u, v);
    EXPECT_EQ(spec.intersection_dim, 0); // U∩V = {0}
    EXPECT_NEAR(spec.friedrichs_cos, model.friedrichs_cos(), 1e-12);
    EXPECT_EQ(intersect(u, v).dim(), 0);
}

TEST(BuildTruncated, BlocksDecoupleUnderTheOperator) {
    // composition-form orbit on the full space equals the per-block closed form
    const int m = 8;
    const BlockModel model = BlockModel::canonical(m);
    const auto [u, v] = build_truncated(model);
    const Vector x0 = canonical_start(m);

    const auto trace = run_dr(u, v, x0, StoppingRule::fixed_count(12), 100, true);
    for (const auto& step : trace.steps) {
        ASSERT_TRUE(step.iterate.has_value());
        for (int k = 0; k < m; ++k) {
            const Eigen::Matrix2d block =
                closed_form_dr_power(PlaneConfig(model.angles[static_cast<std::size_t>(k)]), step.n);
            const Eigen::Vector2d expected = block * Eigen::Vector2d(x0(2 * k), x0(2 * k + 1));
            EXPECT_LE(std::abs((*step.iterate)(2 * k) - expected(0)), 1e-12);
            EXPECT_LE(std::abs((*step.iterate)(2 * k + 1) - expected(1)), 1e-12);
        }
    }
}

TEST(BuildTruncated, EnlargingTruncationNeverDecreasesFriedrichsCos) {
    double prev = 0.0;
    for (int m : {1, 2, 5, 10, 50, 200}) {
        const double c = BlockModel::canonical(m).friedrichs_cos();
        EXPECT_GE(c, prev);
        prev = c;
    }
}

TEST(DrNormSequence, MonotoneDecreaseToZero) {
    const BlockModel model = BlockModel::canonical(100);
    const Vector x0 = canonical_start(100);
    const auto norms = dr_norm_sequence(model, x0, 500);
    ASSERT_EQ(norms.size(), 501u);
    for (std::size_t i = 1; i < norms.size(); ++i) EXPECT_LT(norms[i], norms[i - 1]);
}

TEST(DrNormSequence, AgreesWithDenseOrbit) {
    const int m = 6;
    const BlockModel model = BlockModel::canonical(m);
    const auto [u, v] = build_truncated(model);
    const Vector x0 = canonical_start(m);
    const auto norms = dr_norm_sequence(model, x0, 10);
    const auto trace = run_dr(u, v, x0, StoppingRule::fixed_count(10), 100);
    for (const auto& step : trace.steps)
        EXPECT_NEAR(step.err_iterate, norms[static_cast<std::size_t>(step.n)], 1e-12);
}

TEST(SublinearityCertificate, CanonicalInstanceDiverges) {
    const BlockModel model = BlockModel::canonical(100);
    const Vector x0 = canonical_start(100);
    const auto table = sublinearity_certificate(model, x0, 0.9, 400);

    // eventually strictly increasing
    bool increasing_tail = false;
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
        if (table.rows[i].measured > table.rows[i - 1].measured) {
            increasing_tail = true;
            for (std::size_t j = i + 1; j < table.rows.size(); ++j)
                EXPECT_GT(table.rows[j].measured, table.rows[j - 1].measured);
            break;
        }
    }
    EXPECT_TRUE(increasing_tail);

    // the witnessing bound alone crosses 1e6 within n <= 400
    bool bound_crosses = false;
    for (const auto& r : table.rows)
        if (r.bound > 1e6) bound_crosses = true;
    EXPECT_TRUE(bound_crosses);
    EXPECT_TRUE(table.crosses(1e6));

    // measured dominates its own lower bound everywhere
    for (const auto& r : table.rows) EXPECT_GE(r.measured, r.bound - 1e-10);
}

TEST(SublinearityCertificate, NoWitnessIsStructuredError) {
    const BlockModel model = BlockModel::canonical(3); // cosines 0.5, 0.707, 0.924
    const Vector x0 = canonical_start(3);
    try {
        sublinearity_certificate(model, x0, 0.99, 100);
        FAIL() << "expected CertificateError";
    } catch (const CertificateError& e) {
        EXPECT_EQ(e.gamma, 0.99);
        EXPECT_LT(e.max_cosine, 0.99);
        // smallest usable truncation must actually work
        const BlockModel bigger = BlockModel::canonical(static_cast<int>(e.smallest_usable_m));
        EXPECT_GT(bigger.friedrichs_cos(), 0.99);
        // and one block fewer must not
        const BlockModel smaller = BlockModel::canonical(static_cast<int>(e.smallest_usable_m) - 1);
        EXPECT_LE(smaller.friedrichs_cos(), 0.99);
    }
}

TEST(SublinearityCertificate, SingleBlockGrowthRatioIsExact) {
    const double theta0 = kPi / 3.0;
    const double gamma = 0.4; // < cos(pi/3) = 0.5
    const BlockModel model({theta0});
    Vector x0(2);
    x0 << 1.0, 0.5;
    const auto table = sublinearity_certificate(model, x0, gamma, 30);
    const double ratio = std::cos(theta0) / gamma;
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
        EXPECT_NEAR(table.rows[i].measured / table.rows[i - 1].measured, ratio, 1e-12);
        EXPECT_NEAR(table.rows[i].bound / table.rows[i - 1].bound, ratio, 1e-12);
    }
}

TEST(ShadowSublinearity, MeasuredDominatesDiagonalBound) {
    const BlockModel model = BlockModel::canonical(300);
    const auto table = shadow_sublinearity(model, 0.9, 300);
    ASSERT_GE(table.witness_index, 0);
    EXPECT_GT(table.delta, 1.0);
    for (const auto& r : table.rows) {
        if (r.n >= table.witness_index) {
            EXPECT_GE(r.measured, r.bound - 1e-10) << "n=" << r.n;
        }
    }
}

TEST(ShadowSublinearity, StartRowIsShadowNormOfStart) {
    const int m = 50;
    const BlockModel model = BlockModel::canonical(m);
    const auto table = shadow_sublinearity(model, 0.9, 50);
    const Vector x = canonical_start(m);
    double sumsq = 0.0;
    for (int k = 0; k < m; ++k) sumsq += x(2 * k) * x(2 * k);
    EXPECT_NEAR(table.rows[0].measured, std::sqrt(sumsq), 1e-12);
}

TEST(ShadowSublinearity, CrossesThresholdQuickly) {
    const BlockModel model = BlockModel::canonical(400);
    const auto table = shadow_sublinearity(model, 0.9, 400);
    EXPECT_TRUE(table.crosses(1e3));
}

TEST(ShadowSublinearity, RequiresCanonicalModelAndCoverage) {
    EXPECT_THROW(shadow_sublinearity(BlockModel({0.4, 0.3}), 0.9, 2), std::invalid_argument);
    EXPECT_THROW(shadow_sublinearity(BlockModel::canonical(10), 0.9, 50), std::invalid_argument);
    EXPECT_THROW(shadow_sublinearity(BlockModel::canonical(10), 1.5, 5), std::invalid_argument);
}

TEST(GrowthTable, ColumnarFormat) {
    const BlockModel model = BlockModel::canonical(10);
    const auto table = sublinearity_certificate(model, canonical_start(10), 0.5, 5);
    std::ostringstream os;
    write_growth_table(os, table);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    EXPECT_EQ(line, "# n measured bound");
    int rows = 0;
    while (std::getline(is, line))
        if (!line.empty()) ++rows;
    EXPECT_EQ(rows, 6);
}
