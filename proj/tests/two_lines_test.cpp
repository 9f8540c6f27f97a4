#include "drs/two_lines.hpp"

#include "drs/iteration.hpp"
#include "drs/operators.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace drs;

namespace {

Vector vec2(double a, double b) {
    Vector v(2);
    v << a, b;
    return v;
}

} // namespace

TEST(ClosedFormPower, ZeroPowerIsIdentity) {
    const Eigen::Matrix2d p = closed_form_dr_power(PlaneConfig(0.4), 0);
    EXPECT_LE((p - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(ClosedFormPower, FirstPowerAtSixtyDegrees) {
    const Eigen::Matrix2d p = closed_form_dr_power(PlaneConfig(kPi / 3.0), 1);
    Eigen::Matrix2d expected;
    const double s3 = std::sqrt(3.0);
    expected << 0.25, -s3 / 4.0, s3 / 4.0, 0.25;
    EXPECT_LE((p - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ClosedFormPower, MatchesGeneralMachineryPower) {
    const double theta = kPi / 17.0;
    const Matrix t = dr_operator(horizontal_line(), line_at(theta)).matrix();
    Matrix power = Matrix::Identity(2, 2);
    for (int n = 0; n <= 5; ++n) {
        const Eigen::Matrix2d closed = closed_form_dr_power(PlaneConfig(theta), n);
        EXPECT_LE((power - closed).cwiseAbs().maxCoeff(), 1e-13) << "n=" << n;
        power = t * power;
    }
}

TEST(ClosedFormNorms, RegeneratesDecayCurvesFromTraces) {
    // the three fixed-angle curves at theta = pi/17, x = e0, n = 1..100
    const double theta = kPi / 17.0;
    const PlaneConfig cfg(theta);
    const Subspace u = horizontal_line();
    const Subspace v = line_at(theta);
    const Vector e0 = vec2(1, 0);

    const auto dr_trace = run_dr(u, v, e0, StoppingRule::fixed_count(100), 1000);
    const auto map_trace = run_map(u, v, e0, StoppingRule::fixed_count(100), 1000);
    for (long n = 1; n <= 100; ++n) {
        const TwoLineNorms norms = closed_form_norms(cfg, e0, n);
        const auto& ds = dr_trace.steps[static_cast<std::size_t>(n)];
        const auto& ms = map_trace.steps[static_cast<std::size_t>(n)];
        EXPECT_NEAR(ds.err_iterate, norms.dr_norm, 1e-12) << "n=" << n;
        EXPECT_NEAR(ds.err_shadow_u, norms.shadow_norm, 1e-12) << "n=" << n;
        EXPECT_NEAR(ms.err_iterate, norms.map_norm, 1e-12) << "n=" << n;
    }
}

TEST(ClosedFormNorms, ZeroStartGivesZeros) {
    const TwoLineNorms norms = closed_form_norms(PlaneConfig(0.5), vec2(0, 0), 7);
    EXPECT_EQ(norms.dr_norm, 0.0);
    EXPECT_EQ(norms.shadow_norm, 0.0);
    EXPECT_EQ(norms.map_norm, 0.0);
}

TEST(ClosedFormNorms, RightAngleKillsEverythingAtOnce) {
    const TwoLineNorms norms = closed_form_norms(PlaneConfig(kPi / 2.0), vec2(1, 1), 1);
    EXPECT_NEAR(norms.dr_norm, 0.0, 1e-15);
    EXPECT_NEAR(norms.map_norm, 0.0, 1e-15);
}

TEST(ClosedFormNorms, ShadowNeverExceedsIterateNorm) {
    const PlaneConfig cfg(kPi / 17.0);
    const Vector x = vec2(0.3, -1.2);
    for (long n = 1; n <= 200; ++n) {
        const TwoLineNorms norms = closed_form_norms(cfg, x, n);
        EXPECT_LE(norms.shadow_norm, norms.dr_norm + 1e-14);
    }
}

TEST(ClosedFormNorms, ShadowRipples) {
    const PlaneConfig cfg(kPi / 17.0);
    const Vector e0 = vec2(1, 0);
    bool strict_increase = false;
    double prev = closed_form_norms(cfg, e0, 1).shadow_norm;
    for (long n = 2; n <= 100; ++n) {
        const double cur = closed_form_norms(cfg, e0, n).shadow_norm;
        if (cur > prev) strict_increase = true;
        prev = cur;
    }
    EXPECT_TRUE(strict_increase);
}

TEST(ClosedFormNorms, AlternatingProjectionsEventuallyWin) {
    const double theta = kPi / 17.0;
    const PlaneConfig cfg(theta);
    const Vector e0 = vec2(1, 0);
    const TwoLineNorms norms = closed_form_norms(cfg, e0, 100);
    // map/dr ratio is cos^{n-1}θ·|x₁|/‖x‖, already well below 1 at n = 100
    EXPECT_NEAR(norms.map_norm / norms.dr_norm, std::pow(std::cos(theta), 99.0), 1e-12);
    EXPECT_LT(norms.map_norm, norms.dr_norm);
}

TEST(PlaneConfig, RejectsAnglesOutsideRange) {
    EXPECT_THROW(PlaneConfig(0.0), std::invalid_argument);
    EXPECT_THROW(PlaneConfig(-0.3), std::invalid_argument);
    EXPECT_THROW(PlaneConfig(kPi / 2.0 + 0.1), std::invalid_argument);
    EXPECT_NO_THROW(PlaneConfig(kPi / 2.0));
}

TEST(FigureSurface, RightAngleEdgeVanishes) {
    const auto grid = figure_surface({1.0}, {1, 2, 5}, PlaneQuantity::DR);
    for (double v : grid.values) EXPECT_NEAR(v, 0.0, 1e-15);
}

TEST(FigureSurface, ZeroAngleEdgeIsConstantOne) {
    for (PlaneQuantity q : {PlaneQuantity::DR, PlaneQuantity::MAP, PlaneQuantity::SHADOW}) {
        const auto grid = figure_surface({0.0}, {1, 10, 100}, q);
        for (double v : grid.values) EXPECT_EQ(v, 1.0);
    }
}

TEST(FigureSurface, InteriorPointsMatchPointwiseClosedForm) {
    const std::vector<double> ts{0.3, 0.55, 0.8};
    const std::vector<long> ns{1, 7, 40};
    const auto grid = figure_surface(ts, ns, PlaneQuantity::SHADOW);
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double theta = (kPi / 2.0) * ts[i] * ts[i] * ts[i];
        for (std::size_t j = 0; j < ns.size(); ++j) {
            const TwoLineNorms norms = closed_form_norms(PlaneConfig(theta), vec2(1, 0), ns[j]);
            EXPECT_NEAR(grid.at(i, j), norms.shadow_norm, 1e-14);
        }
    }
}

TEST(FigureSurface, RejectsEmptyGrids) {
    EXPECT_THROW(figure_surface({}, {1}, PlaneQuantity::DR), std::invalid_argument);
    EXPECT_THROW(figure_surface({0.5}, {}, PlaneQuantity::DR), std::invalid_argument);
}

TEST(DataFormat, SurfaceFileHasHeaderAndColumns) {
    const auto grid = figure_surface({0.5}, {1, 2}, PlaneQuantity::MAP);
    std::ostringstream os;
    write_surface(os, grid);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    EXPECT_EQ(line, "# quantity theta_param n value");
    int rows = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        EXPECT_EQ(line.rfind("MAP ", 0), 0u);
        ++rows;
    }
    EXPECT_EQ(rows, 2);
}

TEST(DataFormat, CurvesFileCarriesAllThreeQuantities) {
    std::ostringstream os;
    write_curves(os, kPi / 17.0, 3);
    const std::string text = os.str();
    EXPECT_NE(text.find("DR "), std::string::npos);
    EXPECT_NE(text.find("SHADOW "), std::string::npos);
    EXPECT_NE(text.find("MAP "), std::string::npos);
}
