#include <gtest/gtest.h>

#include <cmath>

#include "grimm/exponents.hpp"

using grimm::Rational;

TEST(DeltaOfLambda, Examples) {
    EXPECT_NEAR(grimm::delta_of_lambda(1.0 / 30.0, 0.0), 0.25 + 1.0 / 60.0, 1e-15);
    EXPECT_NEAR(grimm::delta_of_lambda(1.0 / 30.0, 0.0), 0.266667, 1e-6);
    EXPECT_DOUBLE_EQ(grimm::delta_of_lambda(1.0 / 32.0, 0.0), 0.265625);
    const double full = grimm::delta_of_lambda(1.0 / 31.0, 0.0);
    EXPECT_DOUBLE_EQ(grimm::delta_of_lambda(1.0 / 31.0, full), 0.0);
    EXPECT_EQ(grimm::delta_of_lambda(Rational(1, 30)), Rational(4, 15));
}

TEST(DeltaOfLambda, RangeIsEnforced) {
    EXPECT_THROW(grimm::delta_of_lambda(1.0 / 33.0), std::out_of_range);
    EXPECT_THROW(grimm::delta_of_lambda(1.0 / 29.0), std::out_of_range);
    EXPECT_THROW(grimm::delta_of_lambda(0.1), std::out_of_range);
    EXPECT_THROW(grimm::delta_of_lambda(Rational(1, 33)), std::out_of_range);
    EXPECT_THROW(grimm::delta_of_lambda(1.0 / 30.0, -0.1), std::invalid_argument);
}

TEST(GammaTheorem4, HeadlineConstantExactly) {
    const Rational lambda(1, 30);
    const Rational g = grimm::gamma_theorem4(grimm::alpha_of_lambda(lambda), grimm::delta_of_lambda(lambda));
    EXPECT_EQ(g, Rational(1, 2) - Rational(1, 390));
    EXPECT_EQ(g, Rational(97, 195));
}

TEST(GammaTheorem4, HeadlineConstantInFloatingPoint) {
    const double lambda = 1.0 / 30.0;
    const double g = grimm::gamma_theorem4(grimm::alpha_of_lambda(lambda), grimm::delta_of_lambda(lambda, 0.0));
    EXPECT_NEAR(g, 0.5 - 1.0 / 390.0, 1e-12);
    EXPECT_NEAR(g, 0.497436, 1e-6);
}

TEST(GammaTheorem4, Boundaries) {
    EXPECT_DOUBLE_EQ(grimm::gamma_theorem4(0.3, 0.0), 0.5);
    EXPECT_DOUBLE_EQ(grimm::gamma_theorem4(0.3, 1.0), 0.3);
    EXPECT_THROW(grimm::gamma_theorem4(0.5, 0.3), std::out_of_range);
    EXPECT_THROW(grimm::gamma_theorem4(0.3, 1.5), std::out_of_range);
}

TEST(GammaTheorem4, BelowHalfAndNonincreasingInDelta) {
    for (int a = 1; a < 500; ++a) {
        const double alpha = a * 1e-3;
        double prev = INFINITY;
        for (int d = 1; d < 1000; ++d) {
            const double g = grimm::gamma_theorem4(alpha, d * 1e-3);
            ASSERT_LT(g, 0.5) << alpha << " " << d;
            ASSERT_LE(g, prev);
            prev = g;
        }
    }
}

TEST(Alpha1, AtOneThird) {
    EXPECT_NEAR(grimm::alpha1_heuristic(1.0 / 3.0), 0.45762, 1e-5);
    EXPECT_NEAR(grimm::alpha1_quartic(1.0 / 3.0), 49.0 / 108.0, 1e-15);
}

TEST(Alpha1, NearZeroAndPole) {
    EXPECT_NEAR(grimm::alpha1_heuristic(1e-9), 0.5, 1e-8);
    EXPECT_THROW(grimm::alpha1_heuristic(0.9), std::domain_error);
    EXPECT_NO_THROW(grimm::alpha1_heuristic(0.86));
    EXPECT_THROW(grimm::alpha1_heuristic(0.0), std::out_of_range);
}

TEST(Alpha1, GridScan) {
    auto s = grimm::scan_alpha1(1e-4, 0.8);
    // Brute scan written out independently.
    double best = INFINITY, arg = 0.0;
    for (int i = 1; i < 8000; ++i) {
        double a = i * 1e-4;
        double l = std::log(1.0 - a);
        double v = (1.0 + (1.0 - a) * l) / (2.0 + l);
        if (v < best) { best = v; arg = a; }
    }
    EXPECT_DOUBLE_EQ(s.min_branch, best);
    EXPECT_DOUBLE_EQ(s.argmin_branch, arg);
    EXPECT_NEAR(s.argmin_quartic, 1.0 / 3.0, 1e-4);
    EXPECT_LT(s.min_alpha1, 0.5);
    EXPECT_GE(s.min_alpha1, s.min_branch);
}

TEST(ExponentReport, PipelineAtOneThirtieth) {
    auto r = grimm::exponent_report(1.0 / 30.0);
    EXPECT_NEAR(r.alpha, 29.0 / 60.0, 1e-15);
    EXPECT_NEAR(r.delta, 4.0 / 15.0, 1e-15);
    EXPECT_NEAR(r.gamma, 97.0 / 195.0, 1e-12);
    ASSERT_TRUE(r.alpha1.has_value());
}
