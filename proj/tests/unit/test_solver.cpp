#include <gtest/gtest.h>

#include <cmath>

#include "flashiv/error.hpp"
#include "flashiv/oracle.hpp"
#include "flashiv/solver.hpp"

namespace flashiv {
namespace {

constexpr double kAtmPrice = 0x1.464507526870fp-4;  // 2 Phi(0.1) - 1

double rel(double a, double b) { return std::fabs(a / b - 1.0); }

double lnc_of(double x, double v) { return log_black_price_hi(x, v).to_double(); }

TEST(H3Step, FixedPointAtTheRoot) {
    const double v = 0.4;
    const double target = log_price(-1.0, v, ErfcxTier::Exact).lnc;
    const H3Step s = h3_step(-1.0, v, target, ErfcxTier::Exact);
    EXPECT_EQ(s.f, 0.0);
    EXPECT_EQ(s.v_next, v);
}

TEST(H3Step, QuarticContraction) {
    const double x = -1.0;
    const double v_ref = 0.4;
    const double target = lnc_of(x, v_ref);
    double worst = 0.0;
    for (double v0 : {0.5, 0.45, 0.42, 0.36, 0.33}) {
        const double e0 = std::fabs(v0 - v_ref);
        const double e1 = std::fabs(h3_step(x, v0, target, ErfcxTier::Exact).v_next - v_ref);
        // Below the quartic regime's reach the error sits at rounding level.
        if (e1 > 1e-14) {
            worst = std::fmax(worst, e1 / std::pow(e0, 4));
        }
    }
    EXPECT_LE(worst, 25.0);
    const double e1 = std::fabs(h3_step(x, 0.5, target, ErfcxTier::Exact).v_next - v_ref);
    EXPECT_LE(e1, 25.0 * std::pow(0.1, 4));
}

TEST(H3Step, TwoExactStepsFromThreeDigits) {
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        const double x = -4.0 * i / 9.0;
        for (int j = 0; j < 10; ++j) {
            const double v_ref = 0.05 * std::pow(40.0, j / 9.0);
            const double target = lnc_of(x, v_ref);
            double v = v_ref * (1.0 + (j % 2 == 0 ? 1e-3 : -1e-3));
            v = h3_step(x, v, target, ErfcxTier::Exact).v_next;
            const H3Step s2 = h3_step(x, v, target, ErfcxTier::Exact);
            const double f_after = derivative_bundle(x, s2.v_next, target, ErfcxTier::Exact).f;
            // The residual cannot resolve below the spacing of doubles near ln c.
            worst = std::fmax(worst, std::fabs(f_after) / std::fmax(1.0, std::fabs(target)));
        }
    }
    EXPECT_LE(worst, 1e-14);
}

TEST(H3Step, ClampedAtFloor) {
    // A seed far too high for a tiny price would step below zero without the clamp.
    const double target = std::log(1e-300);
    const H3Step s = h3_step<ErfcxTier::Exact>(-0.001, 5.0, target, 1e-10);
    EXPECT_GE(s.v_next, 1e-10);
}

TEST(SolverConfig, Validation) {
    EXPECT_NO_THROW(SolverConfig{}.validate());
    SolverConfig bad;
    bad.safety_threshold = 0.0;
    EXPECT_THROW(bad.validate(), Error);
    bad = {};
    bad.upper_guard = 1.0;
    EXPECT_THROW(bad.validate(), Error);
    bad = {};
    bad.seed_floor = 0.0;
    EXPECT_THROW(bad.validate(), Error);
}

TEST(SolveNormalized, AtTheMoney) {
    const SolverResult r = solve_normalized(0.0, kAtmPrice, 1.0);
    EXPECT_LE(rel(r.total_vol, 0.2), 1e-13);
    EXPECT_EQ(r.fast_steps, 1);
    EXPECT_EQ(r.exact_steps, 2);
    EXPECT_FALSE(r.safety_fired);
}

TEST(SolveNormalized, DeepOutOfTheMoneyTinyPrice) {
    const double x = -13.8;
    const double c = 1e-30;
    const SolverResult r = solve_normalized(x, c, 1.0);
    ASSERT_TRUE(std::isfinite(r.total_vol));
    EXPECT_LE(rel(r.total_vol, iv_reference(x, c)), 1e-12);
}

TEST(SolveNormalized, StepCountsOnMainPath) {
    for (double x : {-0.01, -0.5, -2.0, -6.0}) {
        for (double v : {0.05, 0.3, 1.5}) {
            const double c = black_price_hi(x, v).to_double();
            if (c < 1e-300) {
                continue;
            }
            const SolverResult r = solve_normalized(x, c, 1.0);
            EXPECT_EQ(r.fast_steps, 1);
            EXPECT_TRUE(r.exact_steps == 2 || r.exact_steps == 3);
            EXPECT_EQ(r.exact_steps == 3, r.safety_fired);
            EXPECT_EQ(r.halley_steps, 0);
            EXPECT_LE(rel(r.total_vol, v), 1e-12) << x << ' ' << v;
        }
    }
}

TEST(SolveNormalized, SafetyThresholdControlsThirdStep) {
    SolverConfig always;
    always.safety_threshold = 1e-300;
    const double c = black_price_hi(-1.0, 0.3).to_double();
    const SolverResult r = solve_normalized(-1.0, c, 1.0, always);
    EXPECT_TRUE(r.safety_fired);
    EXPECT_EQ(r.exact_steps, 3);
    SolverConfig never;
    never.safety_threshold = 1e300;
    EXPECT_FALSE(solve_normalized(-1.0, c, 1.0, never).safety_fired);
}

TEST(SolveNormalized, Denormalizes) {
    const double c = black_price_hi(-0.2, 0.6).to_double();
    const SolverResult r = solve_normalized(-0.2, c, 4.0);
    EXPECT_EQ(r.sigma, r.total_vol / 2.0);
}

TEST(UpperBranch, AtTheMoney) {
    const SolverResult r = solve_normalized(0.0, 0.995, 1.0);
    EXPECT_EQ(r.branch, GuessBranch::UpperPrice);
    EXPECT_EQ(r.halley_steps, 3);
    EXPECT_EQ(r.fast_steps + r.exact_steps, 0);
    EXPECT_NEAR(2.0 * norm_cdf(0.5 * r.total_vol) - 1.0, 0.995, 1e-12);
    EXPECT_LE(rel(r.total_vol, 0x1.674ce1ece6f2ap+2), 1e-12);
}

TEST(UpperBranch, BoundaryRoutes) {
    const SolverResult at = solve_normalized(-0.3, kUpperGuard, 1.0);
    EXPECT_EQ(at.branch, GuessBranch::UpperPrice);
    EXPECT_EQ(at.exact_steps, 0);
    const double below = std::nextafter(kUpperGuard, 0.0);
    const SolverResult main = solve_normalized(-0.3, below, 1.0);
    EXPECT_NE(main.branch, GuessBranch::UpperPrice);
    EXPECT_EQ(main.fast_steps, 1);
}

TEST(UpperBranch, ComplementaryRoundTripGrid) {
    double worst = 0.0;
    for (int i = 0; i <= 12; ++i) {
        const double x = -3.0 * i / 12.0;
        for (int j = 0; j <= 16; ++j) {
            const double q = std::pow(10.0, -2.0 - 8.0 * j / 16.0);
            const double c = 1.0 - q;
            const SolverResult r = solve_normalized(x, c, 1.0);
            ASSERT_EQ(r.branch, GuessBranch::UpperPrice);
            const DoubleDouble q_out = complementary_price_hi(x, r.total_vol);
            const double err = std::fabs(dd::log(q_out).to_double() - std::log(1.0 - c));
            worst = std::fmax(worst, err);
        }
    }
    EXPECT_LE(worst, 1e-10);
}

TEST(UpperBranch, PolishBypassed) {
    SolverConfig cfg;
    cfg.polish = Polish::On;
    const SolverResult r = solve_normalized(-0.1, 0.995, 1.0, cfg);
    EXPECT_FALSE(r.polished);
}

TEST(BachelierLimit, AtTheMoneyClosedForm) {
    const SolverResult r = solve_normalized(0.0, 1e-7, 1.0);
    EXPECT_EQ(r.branch, GuessBranch::BachelierLimit);
    EXPECT_EQ(r.fast_steps + r.exact_steps + r.halley_steps, 0);
    EXPECT_LE(rel(r.total_vol, 0x1.0d25ac616f0eep-22), 1e-12);
    EXPECT_LE(rel(r.total_vol, detail::kSqrt2Pi * 1e-7), 1e-12);
}

TEST(BachelierLimit, EdgeOfTheBox) {
    const double v = bachelier_limit_branch(NormalizedQuote::make(-1e-8, 1e-6, 1.0));
    EXPECT_LE(rel(v, iv_reference(-1e-8, 1e-6)), 1e-12);
}

TEST(BachelierLimit, TinyPriceRoundTrips) {
    const double v = bachelier_limit_branch(NormalizedQuote::make(-1e-9, 1e-20, 1.0));
    ASSERT_TRUE(std::isfinite(v));
    ASSERT_GT(v, 0.0);
    // The double objective cancels at this v, so the check uses the oracle's log price.
    EXPECT_LE(std::fabs(log_black_price_hi(-1e-9, v).to_double() - std::log(1e-20)), 1e-10);
}

TEST(BachelierLimit, MatchesOracleAcrossBox) {
    double worst = 0.0;
    for (double x : {0.0, -1e-12, -1e-10, -3e-9, -1e-8}) {
        for (double c : {1e-6, 3e-7, 1e-8, 1e-10, 1e-13}) {
            const double v = bachelier_limit_branch(NormalizedQuote::make(x, c, 1.0));
            worst = std::fmax(worst, rel(v, iv_reference(x, c)));
        }
    }
    EXPECT_LE(worst, 1e-12);
}

TEST(PolishNewton, StaysAtTheRoot) {
    const double v_ref = 0.3;
    const double c = black_price_hi(-0.4, v_ref).to_double();
    const double root = iv_reference(-0.4, c);
    const double v_out = polish_newton(NormalizedQuote::make(-0.4, c, 1.0), root);
    EXPECT_LE(ulp_error(v_out, root), 1.0);
}

TEST(PolishNewton, RepairsNearAtmLowVol) {
    const double x = -1e-8;
    const double v_ref = 1e-3;
    const double c = black_price_hi(x, v_ref).to_double();
    const double root = iv_reference(x, c);
    SolverConfig cfg;
    cfg.polish = Polish::On;
    const SolverResult r = solve_normalized(x, c, 1.0, cfg);
    EXPECT_TRUE(r.polished);
    EXPECT_LE(ulp_error(r.total_vol, root), 10.0);
}

TEST(PolishNewton, VegaUnderflowLeavesInputUnchanged) {
    const NormalizedQuote q = NormalizedQuote::make(-700.0, 1e-300, 1.0);
    EXPECT_EQ(polish_newton(q, 1e-3), 1e-3);
}

TEST(Solve, AtTheMoneyCall) {
    const SolverResult r = solve({OptionKind::Call, 100.0, 100.0, 100.0 * kAtmPrice, 1.0});
    EXPECT_LE(rel(r.sigma, 0.2), 1e-13);
}

TEST(Solve, OutOfTheMoneyPut) {
    const double expiry = 0.25;
    const double sigma = 0.3;
    // Put F = 100, K = 80 is an OTM call on (80, 100) after normalisation.
    const double c = black_price_hi(std::log(0.8), sigma * std::sqrt(expiry)).to_double();
    const SolverResult r = solve({OptionKind::Put, 100.0, 80.0, 80.0 * c, expiry});
    EXPECT_LE(rel(r.sigma, sigma), 1e-12);
}

TEST(Solve, IntrinsicPriceRejected) {
    try {
        solve({OptionKind::Call, 110.0, 100.0, 10.0, 1.0});
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::PriceBelowIntrinsic);
    }
}

}  // namespace
}  // namespace flashiv
