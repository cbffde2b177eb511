#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "flashiv/error.hpp"
#include "flashiv/math_kernels.hpp"
#include "flashiv/objective.hpp"
#include "flashiv/oracle.hpp"
#include "quadrature.hpp"

namespace flashiv {
namespace {

constexpr double kAtmPrice = 0x1.464507526870fp-4;  // 2 Phi(0.1) - 1

double rel(double a, double b) { return std::fabs(a / b - 1.0); }

double dd_rel(DoubleDouble a, DoubleDouble b) { return std::fabs(((a - b) / b).to_double()); }

TEST(BlackPriceHi, FrozenValues) {
    EXPECT_EQ(black_price_hi(-1.0, 0.5).to_double(), 0x1.bf959718ef636p-8);
    EXPECT_EQ(black_price_hi(-5.0, 0.79).to_double(), 0x1.6d84e11299785p-33);
    EXPECT_EQ(black_price_hi(-0.01, 3.0).to_double(), 0x1.bb3f2c2cd4156p-1);
    EXPECT_EQ(black_price_hi(0.0, 0.2).to_double(), kAtmPrice);
}

TEST(BlackPriceHi, AtTheMoneyClosedForm) {
    for (double v : {1e-6, 0.01, 0.2, 1.0, 4.0}) {
        // 2 Phi(v / 2) - 1 = erf(v / (2 sqrt 2)).
        EXPECT_LE(rel(black_price_hi(0.0, v).to_double(), std::erf(0.5 * v * detail::kOneOverSqrt2)), 4e-16) << v;
    }
}

TEST(BlackPriceHi, VanishesMonotonicallyAsVolatilityFalls) {
    for (double x : {-0.01, -1.0, -4.0}) {
        double prev = black_price_hi(x, 1.0).to_double();
        for (int i = 1; i <= 200; ++i) {
            const double v = std::pow(10.0, -4.0 * i / 200.0);
            const double cur = black_price_hi(x, v).to_double();
            ASSERT_LE(cur, prev) << x << ' ' << v;
            prev = cur;
        }
        EXPECT_LT(prev, 1e-300);
    }
}

TEST(BlackPriceHi, MatchesQuadratureAtReferencePoint) {
    EXPECT_LE(dd_rel(black_price_hi(-1.0, 0.5), testing::black_price_quadrature(-1.0, 0.5)), 1e-20);
}

TEST(BlackPriceHi, MatchesQuadratureOnRandomPoints) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ux(-6.0, 0.0);
    std::uniform_real_distribution<double> ulv(std::log(0.02), std::log(4.0));
    int checked = 0;
    double worst = 0.0;
    while (checked < 100) {
        const double x = ux(rng);
        const double v = std::exp(ulv(rng));
        const DoubleDouble c = black_price_hi(x, v);
        if (c.hi < 1e-200) {
            continue;
        }
        worst = std::fmax(worst, dd_rel(c, testing::black_price_quadrature(x, v)));
        ++checked;
    }
    EXPECT_LE(worst, 1e-20);
}

TEST(BlackPriceHi, ComplementAndLogAgree) {
    for (double x : {0.0, -0.3, -2.0}) {
        for (double v : {0.1, 1.0, 5.0}) {
            const DoubleDouble c = black_price_hi(x, v);
            const DoubleDouble q = complementary_price_hi(x, v);
            EXPECT_LE(std::fabs((c + q - DoubleDouble(1.0)).to_double()), 1e-28);
            EXPECT_LE(std::fabs((log_black_price_hi(x, v) - dd::log(c)).to_double()), 1e-26 * (1 + std::fabs(dd::log(c).hi)));
        }
    }
}

TEST(BlackPriceHi, AgreesWithDoublePrecisionObjective) {
    double worst = 0.0;
    for (int i = 0; i <= 40; ++i) {
        const double x = -10.0 * i / 40.0;
        for (int j = 0; j <= 40; ++j) {
            const double v = 0.01 * std::pow(400.0, j / 40.0);
            // Near-ATM low-vol corner is excluded: the double subtraction loses bits there.
            if (std::fabs(x) < 0.3 && v < 0.05) {
                continue;
            }
            const double c = black_price_hi(x, v).to_double();
            if (c < 1e-300) {
                continue;
            }
            worst = std::fmax(worst, rel(std::exp(log_price(x, v, ErfcxTier::Exact).lnc), c));
        }
    }
    EXPECT_LE(worst, 5e-13);
}

TEST(IvReference, Examples) {
    EXPECT_LE(ulp_error(iv_reference(-0.7, black_price_hi(-0.7, 0.3).to_double()), 0.3), 1.0);
    EXPECT_LE(ulp_error(iv_reference(0.0, kAtmPrice), 0.2), 1.0);
}

TEST(IvReference, IncreasingInPrice) {
    for (double x : {0.0, -0.5, -3.0}) {
        double prev = 0.0;
        for (int i = 0; i <= 60; ++i) {
            const double c = std::pow(10.0, -20.0 + 19.9 * i / 60.0);
            const double v = iv_reference(x, c);
            ASSERT_GT(v, prev) << x << ' ' << c;
            prev = v;
        }
    }
}

TEST(IvReference, RoundTripRandom) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ux(-8.0, 0.0);
    std::uniform_real_distribution<double> ulv(std::log(0.01), std::log(4.0));
    double worst = 0.0;
    int checked = 0;
    while (checked < 1000) {
        const double x = ux(rng);
        const double v = std::exp(ulv(rng));
        const DoubleDouble c = black_price_hi(x, v);
        if (c.hi < 1e-300) {
            continue;
        }
        worst = std::fmax(worst, ulp_error(iv_reference(x, c), v));
        ++checked;
    }
    EXPECT_LE(worst, 1.0);
}

TEST(IvReference, DoubleOverloadMatchesUnroundedWhenExact) {
    for (double c : {0.5, 0.25, 1e-3, 0.75}) {
        EXPECT_EQ(iv_reference(-0.3, c), iv_reference(-0.3, DoubleDouble(c)));
    }
}

TEST(IvReference, BracketFailure) {
    for (double c : {0.0, 1.0, -1.0}) {
        try {
            iv_reference(-1.0, c);
            ADD_FAILURE() << c;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::BracketFailure);
        }
    }
}

TEST(UlpError, Examples) {
    EXPECT_EQ(ulp_error(0.2, 0.2), 0.0);
    EXPECT_EQ(ulp_error(std::nextafter(0.2, 1.0), 0.2), 1.0);
    const double spacing = std::nextafter(0.2, 1.0) - 0.2;
    EXPECT_NEAR(7.0 * spacing, 1.94e-16, 0.01e-16);
    EXPECT_EQ(ulp_error(0.2 + 7.0 * spacing, 0.2), 7.0);
}

TEST(ReferenceCase, RoundsOraclePrice) {
    const ReferenceCase rc = make_reference_case(-1.0, 0.5);
    EXPECT_EQ(rc.c_ref, 0x1.bf959718ef636p-8);
    EXPECT_EQ(rc.v_ref, 0.5);
}

TEST(ErfcxHi, FrozenValues) {
    EXPECT_EQ(erfcx_hi(DoubleDouble(1.0)).to_double(), 0x1.b5d8780f956b2p-2);
    EXPECT_EQ(erfcx_hi(DoubleDouble(-2.5)).to_double(), 0x1.02f4266323b2ap+10);
    EXPECT_EQ(erfcx_hi(DoubleDouble(30.0)).to_double(), 0x1.33f3abfd60d6fp-6);
}

TEST(ErfcxHi, DifferenceMatchesDirectSubtraction) {
    const DoubleDouble a(1.3);
    const DoubleDouble d(0.4);
    const DoubleDouble direct = erfcx_hi(a - d) - erfcx_hi(a + d);
    EXPECT_LE(dd_rel(erfcx_difference_hi(a, d), direct), 1e-27);
}

}  // namespace
}  // namespace flashiv
