#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "../common/ode_problems.hpp"
#include "sldg/error.hpp"
#include "sldg/rkei.hpp"

using namespace sldg;
using ode::Mat;
using ode::Vec;

TEST(Tableau, CollapsedWeights) {
    const auto g = builtin_tableau("CF3G");
    EXPECT_DOUBLE_EQ(g.b(0), 1.0 / 6.0);
    EXPECT_DOUBLE_EQ(g.b(1), 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(g.b(2), 1.0 / 6.0);
    const auto c2 = builtin_tableau("CF2");
    EXPECT_EQ(c2.a(1, 0), 0.5);
    EXPECT_EQ(c2.b(0), 0.0);
    EXPECT_EQ(c2.b(1), 1.0);
    const auto c03 = builtin_tableau("CF3C03");
    EXPECT_DOUBLE_EQ(c03.b(0), 0.25);
    EXPECT_EQ(c03.b(1), 0.0);
    EXPECT_DOUBLE_EQ(c03.b(2), 0.75);
}

TEST(Tableau, Consistency) {
    for (const auto& name : builtin_tableau_names()) {
        const auto t = builtin_tableau(name);
        double sb = 0.0;
        for (int k = 0; k < t.stages; ++k) sb += t.b(k);
        EXPECT_NEAR(sb, 1.0, 1e-15) << name;
        for (int r = 0; r < t.stages; ++r) {
            for (const auto& row : t.stage_rows[r]) {
                for (std::size_t k = r; k < row.size(); ++k) EXPECT_EQ(row[k], 0.0) << name << " is not explicit";
            }
        }
        if (name != "CF1" && name != "CF3C09") {
            for (int r = 0; r < t.stages; ++r) {
                double s = 0.0;
                for (int k = 0; k < r; ++k) s += t.a(r, k);
                EXPECT_DOUBLE_EQ(s, t.c[r]) << name << " stage " << r;
            }
        }
    }
}

TEST(Tableau, ExponentialCounts) {
    EXPECT_EQ(builtin_tableau("CF1").num_exponentials(), 1);
    EXPECT_EQ(builtin_tableau("CF2").num_exponentials(), 2);
    EXPECT_EQ(builtin_tableau("CF3G").num_exponentials(), 4);
    EXPECT_EQ(builtin_tableau("CF3C03").num_exponentials(), 4);
}

TEST(Tableau, UnknownName) { EXPECT_THROW(builtin_tableau("CF9"), UnknownTableau); }

TEST(MatrixExponential, ZeroIsIdentity) {
    EXPECT_TRUE(matrix_exponential(Mat::Zero(3, 3)).isApprox(Mat::Identity(3, 3), 1e-15));
}

TEST(MatrixExponential, QuarterRotation) {
    const double th = std::numbers::pi / 2;
    Mat a(2, 2);
    a << 0, -th, th, 0;
    const Mat e = matrix_exponential(a);
    EXPECT_NEAR(e(0, 0), 0.0, 1e-15);
    EXPECT_NEAR(e(0, 1), -1.0, 1e-15);
    EXPECT_NEAR(e(1, 0), 1.0, 1e-15);
    EXPECT_NEAR(e(1, 1), 0.0, 1e-15);
}

TEST(MatrixExponential, MatchesLinearOdeIntegration) {
    std::mt19937 rng(17);
    std::normal_distribution<double> d(0.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        Mat a(4, 4);
        for (int i = 0; i < 16; ++i) a(i / 4, i % 4) = d(rng);
        const Mat e = matrix_exponential(a);
        for (int col = 0; col < 4; ++col) {
            const Vec ref = oracle::rk4(Vec(Vec::Unit(4, col)), 1.0, 4000, [&](const Vec& y) -> Vec { return a * y; });
            EXPECT_LT((e.col(col) - ref).norm(), 1e-10 * std::max(1.0, ref.norm()));
        }
    }
}

TEST(RkeiStep, ConstantGeneratorIsOneExponential) {
    Mat rot(2, 2);
    rot << 0, -1, 1, 0;
    Vec y0(2);
    y0 << 1.0, 0.3;
    for (const char* name : {"CF2", "CF3G", "CF3", "CF3C03"}) {
        const Vec y = ode::integrate(builtin_tableau(name), y0, 0.7, 1, [&](const Vec&) { return rot; });
        EXPECT_LT((y - matrix_exponential(0.7 * rot) * y0).norm(), 1e-14) << name;
    }
}

TEST(RkeiStep, FirstOrderRiccatiStep) {
    Vec y0(1);
    y0 << 1.0;
    const Vec y = ode::integrate(builtin_tableau("CF1"), y0, 0.1, 1, ode::riccati_generator);
    EXPECT_NEAR(y(0), std::exp(0.1), 1e-15);
}

TEST(RkeiStep, ObservedOrdersCoupledSystem) {
    for (const auto& name : builtin_tableau_names()) {
        EXPECT_NEAR(ode::measure_orders(builtin_tableau(name)).coupled, ode::expected_order(name), 0.2) << name;
    }
}

TEST(RkeiStep, AsymptoticOrdersRiccati) {
    const std::vector<double> dts = {0.0125, 0.00625, 0.003125};
    Vec y0(1);
    y0 << 1.0;
    for (const auto& name : builtin_tableau_names()) {
        std::vector<double> errs;
        for (double dt : dts) {
            const Vec y = ode::integrate(builtin_tableau(name), y0, 0.5, static_cast<int>(std::lround(0.5 / dt)),
                                         ode::riccati_generator);
            errs.push_back(std::abs(y(0) - 2.0));
        }
        const double p = ode::fitted_order(dts, errs);
        if (name == "CF3G") {
            // Kutta's method on log y, fourth order for this right-hand side.
            EXPECT_NEAR(p, 4.0, 0.2);
        } else {
            EXPECT_NEAR(p, ode::expected_order(name), 0.2) << name;
        }
    }
}

TEST(RkeiStep, ScalarCaseIsClassicalRungeKuttaOnLog) {
    // Scalar generators commute, so CF3G collapses to the explicit RK method
    // with its collapsed tableau applied to z = log y, z' = exp(z).
    Vec y0(1);
    y0 << 1.0;
    const int steps = 7;
    const double h = 0.5 / steps;
    double z = 0.0;
    for (int n = 0; n < steps; ++n) {
        const double k1 = std::exp(z);
        const double k2 = std::exp(z + 0.5 * h * k1);
        const double k3 = std::exp(z + h * (-k1 + 2.0 * k2));
        z += h * (k1 + 4.0 * k2 + k3) / 6.0;
    }
    const Vec y = ode::integrate(builtin_tableau("CF3G"), y0, 0.5, steps, ode::riccati_generator);
    EXPECT_NEAR(y(0), std::exp(z), 1e-14);
}

TEST(RkeiStep, ExponentialsRunInOrder) {
    std::vector<int> seen;
    auto gen = [](double s) { return s; };
    auto combine = [](std::span<const double> w, std::span<const double* const> g) {
        double s = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * *g[i];
        return s;
    };
    auto prop = [&](double y, double g, double dt, int i) {
        seen.push_back(i);
        return y + dt * g;
    };
    rkei_step(1.0, 0.1, builtin_tableau("CF3G"), gen, combine, prop);
    EXPECT_EQ(seen, (std::vector<int>{0, 1, 2, 3}));
}

TEST(RkeiStep, ErrorsNameTheStage) {
    auto gen = [](double s) { return s; };
    auto combine = [](std::span<const double>, std::span<const double* const>) { return 1.0; };
    auto prop = [](double, double, double, int i) -> double {
        if (i == 1) throw DegenerateCell("collapsed", 42);
        return 1.0;
    };
    try {
        rkei_step(1.0, 0.1, builtin_tableau("CF3G"), gen, combine, prop);
        FAIL() << "no exception";
    } catch (const DegenerateCell& e) {
        EXPECT_EQ(e.element(), 42);
        EXPECT_NE(std::string(e.what()).find("stage 3, exponential 2"), std::string::npos) << e.what();
    }
}
