#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "flashiv/error.hpp"
#include "flashiv/objective.hpp"
#include "flashiv/oracle.hpp"
#include "finite_difference.hpp"

namespace flashiv {
namespace {

constexpr double kAtmPrice = 0x1.464507526870fp-4;  // 2 Phi(0.1) - 1

double rel(double a, double b) { return std::fabs(a / b - 1.0); }

TEST(LogPrice, AtTheMoneyClosedForm) {
    const LogPrice p = log_price(0.0, 0.2, ErfcxTier::Exact);
    EXPECT_LE(rel(std::exp(p.lnc), kAtmPrice), 1e-15);
}

TEST(LogPrice, DeepOutOfTheMoneyMatchesOracle) {
    const LogPrice p = log_price(-5.0, 0.79, ErfcxTier::Exact);
    EXPECT_LE(rel(std::exp(p.lnc), 0x1.6d84e11299785p-33), 1e-13);
}

TEST(LogPrice, LargeVolatilityApproachesOne) {
    const LogPrice p = log_price(-1.0, 50.0, ErfcxTier::Exact);
    EXPECT_GT(std::exp(p.lnc), 0.999);
}

TEST(LogPrice, OrderingOfScaledTerms) {
    for (double x : {0.0, -0.1, -1.0, -5.0}) {
        for (double v : {0.01, 0.3, 2.0}) {
            const LogPrice p = log_price(x, v, ErfcxTier::Exact);
            EXPECT_GT(p.n_plus, p.n_minus);
            EXPECT_GT(p.n_minus, 0.0);
            EXPECT_LT(p.lnc, 0.0);
        }
    }
}

TEST(LogPrice, StrictlyIncreasingInVolatility) {
    for (double x : {0.0, -0.01, -0.5, -3.0, -10.0}) {
        double prev = log_price(x, 0.01, ErfcxTier::Exact).lnc;
        for (int i = 1; i <= 500; ++i) {
            const double v = 0.01 * std::pow(500.0, i / 500.0);
            const double cur = log_price(x, v, ErfcxTier::Exact).lnc;
            ASSERT_GT(cur, prev) << "x = " << x << " v = " << v;
            prev = cur;
        }
    }
}

TEST(LogPrice, FiniteWhereThePriceUnderflows) {
    const LogPrice p = log_price(-30.0, 0.5, ErfcxTier::Exact);
    EXPECT_TRUE(std::isfinite(p.lnc));
    EXPECT_LT(p.lnc, std::log(std::numeric_limits<double>::denorm_min()));
    const DerivativeBundle b = derivative_bundle(-30.0, 0.5, p.lnc, ErfcxTier::Exact);
    EXPECT_TRUE(std::isfinite(b.f) && std::isfinite(b.lp) && std::isfinite(b.d2) && std::isfinite(b.d3));
    EXPECT_EQ(b.f, 0.0);
}

// The fast tier's relative error reaches ln(N+ - N-) multiplied by
// (N+ + N-) / (N+ - N-), which is large when |h| >> t.
TEST(LogPrice, TierConsistency) {
    double worst = 0.0;
    for (int i = 0; i <= 60; ++i) {
        const double x = -8.0 * i / 60.0;
        for (int j = 0; j <= 60; ++j) {
            const double v = 0.01 * std::pow(400.0, j / 60.0);
            const LogPrice exact = log_price(x, v, ErfcxTier::Exact);
            const double gain = (exact.n_plus + exact.n_minus) / (exact.n_plus - exact.n_minus);
            const double gap = std::fabs(log_price(x, v, ErfcxTier::Fast).lnc - exact.lnc);
            worst = std::fmax(worst, gap / (5e-3 * gain));
        }
    }
    EXPECT_LE(worst, 1.0);
}

TEST(LogPrice, TierConsistencyWithoutCancellation) {
    double worst = 0.0;
    for (int i = 0; i <= 60; ++i) {
        const double x = -8.0 * i / 60.0;
        for (int j = 0; j <= 60; ++j) {
            const double v = 0.01 * std::pow(400.0, j / 60.0);
            const LogPrice exact = log_price(x, v, ErfcxTier::Exact);
            if (exact.n_plus + exact.n_minus <= 2.0 * (exact.n_plus - exact.n_minus)) {
                worst = std::fmax(worst, std::fabs(log_price(x, v, ErfcxTier::Fast).lnc - exact.lnc));
            }
        }
    }
    EXPECT_LE(worst, 5e-3);
}

TEST(LogPrice, Errors) {
    for (double v : {0.0, -1.0, 1e-301, std::nan(""), double(INFINITY)}) {
        try {
            log_price(-1.0, v, ErfcxTier::Exact);
            ADD_FAILURE() << "no throw for v = " << v;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::DegenerateVolatility);
        }
    }
    try {
        derivative_bundle(0.5, 0.2, -1.0, ErfcxTier::Exact);
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DomainError);
    }
}

TEST(LogPrice, CheckedAndTemplatedAgree) {
    const LogPrice a = log_price(-0.7, 0.4, ErfcxTier::Fast);
    const LogPrice b = log_price<ErfcxTier::Fast>(-0.7, 0.4);
    EXPECT_EQ(a.lnc, b.lnc);
    const DerivativeBundle c = derivative_bundle(-0.7, 0.4, -3.0, ErfcxTier::Exact);
    const DerivativeBundle d = derivative_bundle<ErfcxTier::Exact>(-0.7, 0.4, -3.0);
    EXPECT_EQ(c.f, d.f);
    EXPECT_EQ(c.d3, d.d3);
}

TEST(DerivativeBundle, ResidualAndInverseSlope) {
    const double target = -2.5;
    const DerivativeBundle b = derivative_bundle(-1.0, 0.5, target, ErfcxTier::Exact);
    EXPECT_EQ(b.f, log_price(-1.0, 0.5, ErfcxTier::Exact).lnc - target);
    EXPECT_LE(rel(b.inv_lp * b.lp, 1.0), 4e-16);
}

TEST(DerivativeBundle, SlopePositive) {
    for (int i = 0; i <= 30; ++i) {
        for (int j = 0; j <= 30; ++j) {
            const double x = -12.0 * i / 30.0;
            const double v = 1e-3 * std::pow(5000.0, j / 30.0);
            EXPECT_GT(derivative_bundle(x, v, 0.0, ErfcxTier::Exact).lp, 0.0) << x << ' ' << v;
        }
    }
}

TEST(DerivativeBundle, AtTheMoneySlope) {
    // d ln c / dv at x = 0 is phi(v / 2) / c.
    const DerivativeBundle b = derivative_bundle(0.0, 0.2, 0.0, ErfcxTier::Exact);
    EXPECT_LE(rel(b.lp, 0x1.3eef4c187e2b1p+2), 1e-13);
    EXPECT_LE(rel(b.lp, norm_pdf(0.1) / kAtmPrice), 1e-13);
}

TEST(DerivativeBundle, MatchesFiniteDifferencesOnGrid) {
    double worst_lp = 0.0;
    double worst_d2 = 0.0;
    double worst_d3 = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double x = -6.0 * i / 19.0;
        for (int j = 0; j < 20; ++j) {
            const double v = 0.05 * std::pow(60.0, j / 19.0);
            const DerivativeBundle b = derivative_bundle(x, v, 0.0, ErfcxTier::Exact);
            const auto fd = testing::log_price_derivatives_fd(x, v);
            const double d2_fd = fd[1] / fd[0];
            const double d3_fd = fd[2] / fd[0];
            worst_lp = std::fmax(worst_lp, rel(b.lp, fd[0]));
            worst_d2 = std::fmax(worst_d2, rel(b.d2, d2_fd));
            worst_d3 = std::fmax(worst_d3, rel(b.d3, d3_fd));
        }
    }
    EXPECT_LE(worst_lp, 1e-5);
    EXPECT_LE(worst_d2, 1e-5);
    EXPECT_LE(worst_d3, 1e-5);
}

TEST(DerivativeBundle, PointCheckTighter) {
    const DerivativeBundle b = derivative_bundle(-1.0, 0.5, 0.0, ErfcxTier::Exact);
    const auto fd = testing::log_price_derivatives_fd(-1.0, 0.5);
    EXPECT_LE(rel(b.d2, fd[1] / fd[0]), 1e-6);
    EXPECT_LE(rel(b.d3, fd[2] / fd[0]), 1e-6);
}

}  // namespace
}  // namespace flashiv
