#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "grimm/grimm_core.hpp"
#include "grimm/rho.hpp"
#include "grimm/smooth.hpp"
#include "oracles.hpp"

using grimm::PrimeTable;

namespace {

const PrimeTable& table() {
    static const PrimeTable t = PrimeTable::build(1'100'000);
    return t;
}

const grimm::RhoTable& rho_table() {
    static const grimm::RhoTable r = grimm::build_rho_table(20.0, 1e-3);
    return r;
}

} // namespace

TEST(Psi, SpecExamples) {
    EXPECT_EQ(grimm::psi(10, 3.0, table()), 7u);
    EXPECT_EQ(grimm::psi(57, 57.0, table()), 57u);
    EXPECT_EQ(grimm::psi(57, 100.5, table()), 57u);
    EXPECT_EQ(grimm::psi(1, 1.0, table()), 1u);
    EXPECT_EQ(grimm::psi(0, 5.0, table()), 0u);
}

TEST(Psi, MatchesEnumeration) {
    for (std::uint64_t x : {1ull, 2ull, 10ull, 99ull, 1000ull, 5003ull})
        for (double y : {0.5, 1.0, 2.0, 2.5, 3.0, 7.0, 10.0, 31.6, 70.0, 1000.0})
            ASSERT_EQ(grimm::psi(x, y, table()), oracle::psi(x, y)) << x << "," << y;
}

TEST(Psi, MonotoneInBothArguments) {
    for (std::uint64_t x = 1; x <= 10'000; x += 97) {
        std::uint64_t prev = 0;
        for (double y = 1.0; y <= 200.0; y += 7.5) {
            auto v = grimm::psi(x, y, table());
            ASSERT_GE(v, prev);
            prev = v;
            if (x > 97) {
                ASSERT_GE(v, grimm::psi(x - 97, y, table()));
            }
        }
    }
}

TEST(Psi, GlobalLimitDirectsToWindowedVariant) {
    EXPECT_THROW(grimm::psi(grimm::psi_global_max + 1, 10.0, table()), std::out_of_range);
}

TEST(PsiWindow, SpecExamples) {
    auto w = grimm::psi_window(10, 8, 3.0, table());
    EXPECT_EQ(w.count, 3u);  // 12, 16, 18
    EXPECT_EQ(*w.first_smooth, 12u);
    EXPECT_EQ(*w.last_smooth, 18u);
    EXPECT_EQ(w.pi_y, 2u);
    EXPECT_TRUE(w.bound_established);

    auto z = grimm::psi_window(0, 10, 3.0, table());
    EXPECT_EQ(z.count, 7u);
    EXPECT_EQ(*z.first_smooth, 1u);

    auto none = grimm::psi_window(22, 1, 5.0, table());
    EXPECT_EQ(none.count, 0u);
    EXPECT_FALSE(none.first_smooth.has_value());
    EXPECT_FALSE(none.bound_established);
}

TEST(PsiWindow, AgreesWithGlobalCount) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        std::uint64_t x = 1 + rng() % 100'000;
        double y = 1.0 + static_cast<double>(rng() % 2000) / 3.0;
        ASSERT_EQ(grimm::psi_window(0, x, y, table()).count, grimm::psi(x, y, table())) << x << "," << y;
    }
}

TEST(PsiWindow, CertificateMembersAreSmoothAndInside) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 300; ++i) {
        std::uint64_t x = rng() % 1'000'000;
        std::uint64_t z = 1 + rng() % 300;
        double y = 2.0 + static_cast<double>(rng() % 500);
        auto w = grimm::psi_window(x, z, y, table());
        std::uint64_t brute = 0;
        for (std::uint64_t v = x + 1; v <= x + z; ++v) brute += oracle::is_smooth(v, y);
        ASSERT_EQ(w.count, brute);
        ASSERT_EQ(w.bound_established, w.count > w.pi_y);
        if (w.count) {
            ASSERT_TRUE(oracle::is_smooth(*w.first_smooth, y));
            ASSERT_TRUE(oracle::is_smooth(*w.last_smooth, y));
            ASSERT_GT(*w.first_smooth, x);
            ASSERT_LE(*w.last_smooth, x + z);
        }
    }
}

TEST(PsiWindow, MillionWithAlphaPoint455) {
    const double y = std::pow(1e6, 0.455);
    auto w = grimm::psi_window(1'000'000, static_cast<std::uint64_t>(y), y, table());
    EXPECT_TRUE(w.bound_established) << w.count << " vs " << w.pi_y;
}

TEST(GrimmUpperBound, EmptyWhenCriterionFails) {
    EXPECT_FALSE(grimm::grimm_upper_bound(22, 5.0, 1, table()).has_value());
    EXPECT_FALSE(grimm::grimm_upper_bound(1'000'000, 2.0, 10, table()).has_value());
}

TEST(GrimmUpperBound, BoundsAreSoundAgainstExactG) {
    std::mt19937_64 rng(2026);
    int established = 0;
    for (int i = 0; i < 1500; ++i) {
        std::uint64_t x = 2 + rng() % 100'000;
        double y = std::pow(static_cast<double>(x), 0.3 + 0.2 * static_cast<double>(rng() % 1000) / 1000.0);
        auto z = static_cast<std::uint64_t>(std::ceil(y));
        auto b = grimm::grimm_upper_bound(x, y, z, table());
        if (!b) continue;
        ++established;
        ASSERT_LE(b->first_smooth, b->last_smooth);
        ASSERT_GT(b->smooth_count, b->pi_y);
        ASSERT_LT(grimm::g(x, table()), b->z) << "x=" << x;
        // The smooth numbers themselves already fail Hall's condition.
        auto r = grimm::has_representation(x, b->z, table());
        ASSERT_FALSE(r.representable());
    }
    EXPECT_GT(established, 50);
}

TEST(Rho, TableShape) {
    const auto& r = rho_table();
    ASSERT_GE(r.t_max, 20.0);
    std::size_t per_unit = r.nodes_per_unit();
    for (std::size_t i = 0; i <= per_unit; ++i) ASSERT_EQ(r.values[i], 1.0);
    for (std::size_t i = per_unit + 1; i < r.values.size(); ++i) {
        ASSERT_LT(r.values[i], r.values[i - 1]);
        ASSERT_GT(r.values[i], 0.0);
    }
    EXPECT_LT(r.max_self_consistency_error, 1e-10);
}

TEST(Rho, SpecExamples) {
    EXPECT_EQ(grimm::rho(0.5, rho_table()), 1.0);
    EXPECT_EQ(grimm::rho(0.0, rho_table()), 1.0);
    EXPECT_NEAR(grimm::rho(2.0, rho_table()), 1.0 - std::log(2.0), 1e-9);
    auto half = grimm::build_rho_table(5.0, 5e-4);
    EXPECT_NEAR(grimm::rho(3.0, rho_table()), grimm::rho(3.0, half), 1e-8);
    EXPECT_THROW(grimm::rho(-0.1, rho_table()), std::out_of_range);
    EXPECT_THROW(grimm::rho(rho_table().t_max + 1.0, rho_table()), std::out_of_range);
}

TEST(Rho, AnalyticOnOneToTwo) {
    for (double t = 1.0; t <= 2.0; t += 0.000713)
        ASSERT_NEAR(grimm::rho(t, rho_table()), 1.0 - std::log(t), 1e-6) << t;
}

TEST(Rho, AnalyticOnTwoToThree) {
    // rho(t) = 1 - (1 - log(t-1)) log t + Li2(1 - t) + pi^2/12 on [2, 3],
    // evaluated with mpmath at 30 digits.
    EXPECT_NEAR(grimm::rho(2.5, rho_table()), 0.13031956183225075, 1e-12);
    EXPECT_NEAR(grimm::rho(3.0, rho_table()), 0.04860838829113157, 1e-12);
}

TEST(Rho, KnownTailValues) {
    // Published values (Knuth & Trabb Pardo), relative accuracy.
    EXPECT_NEAR(grimm::rho(4.0, rho_table()) / 4.9109256477608e-3, 1.0, 1e-9);
    EXPECT_NEAR(grimm::rho(5.0, rho_table()) / 3.54724700452553e-4, 1.0, 1e-9);
    EXPECT_NEAR(grimm::rho(10.0, rho_table()) / 2.77017183772596e-11, 1.0, 1e-7);
    EXPECT_GT(grimm::rho(20.0, rho_table()), 0.0);
}

TEST(Rho, BadParameters) {
    EXPECT_THROW(grimm::build_rho_table(10.0, 0.0), std::invalid_argument);
    EXPECT_THROW(grimm::build_rho_table(10.0, 0.3), std::invalid_argument);
    EXPECT_THROW(grimm::build_rho_table(0.5, 1e-3), std::invalid_argument);
}

TEST(Dickman, ConvergesTowardRhoAsXGrows) {
    // At finite x the smooth density sits above rho(1/alpha); the gap should
    // shrink as x grows.
    for (double alpha : {0.5, 1.0 / 3.0}) {
        double prev_err = INFINITY;
        for (std::uint64_t x : {10'000ull, 100'000ull, 1'000'000ull}) {
            double ratio = static_cast<double>(grimm::psi(x, std::pow(static_cast<double>(x), alpha), table())) /
                           static_cast<double>(x);
            double err = std::abs(ratio / grimm::rho(1.0 / alpha, rho_table()) - 1.0);
            EXPECT_LT(err, prev_err) << "alpha=" << alpha << " x=" << x;
            prev_err = err;
        }
    }
}

TEST(ExceptionalScan, SmallScan) {
    auto r = grimm::exceptional_scan(10'000, 0.45, 0.01, table(), 1);
    EXPECT_EQ(r.sampled + r.degenerate, 10'000u);
    EXPECT_GT(r.sampled, 9'000u);
    EXPECT_LE(r.failure_fraction, 0.01);
    EXPECT_EQ(r.stride, 1u);
}

TEST(ExceptionalScan, DegenerateWindowsSkipped) {
    // n^0.05 < 2 for every n <= 10^4.
    auto r = grimm::exceptional_scan(10'000, 0.05, 0.1, table(), 1);
    EXPECT_EQ(r.sampled, 0u);
    EXPECT_EQ(r.degenerate, 10'000u);
    EXPECT_EQ(r.failure_fraction, 0.0);
}

TEST(ExceptionalScan, DefaultC0AndWorkerIndependence) {
    const double c0 = grimm::default_c0(0.45, rho_table());
    EXPECT_NEAR(c0, grimm::rho(1.0 / 0.45, rho_table()) / 2.0, 0.0);
    auto a = grimm::exceptional_scan(50'000, 0.45, c0, table(), 3, 1);
    auto b = grimm::exceptional_scan(50'000, 0.45, c0, table(), 3, 4);
    EXPECT_EQ(a.failures, b.failures);
    EXPECT_EQ(a.sampled, b.sampled);
    EXPECT_EQ(a.argmin_ratio, b.argmin_ratio);
    EXPECT_LT(a.failure_fraction, 0.05);
}

TEST(ExceptionalScan, BadParameters) {
    EXPECT_THROW(grimm::exceptional_scan(100, 0.0, 0.1, table()), std::invalid_argument);
    EXPECT_THROW(grimm::exceptional_scan(100, 0.5, 0.1, table()), std::invalid_argument);
    EXPECT_THROW(grimm::exceptional_scan(100, 0.3, 0.0, table()), std::invalid_argument);
    EXPECT_THROW(grimm::exceptional_scan(100, 0.3, 0.1, table(), 0), std::invalid_argument);
}
