#pragma once

// Fixed-count implied-volatility inversion: one fast-tier third-order
// Householder (H3) step, two exact-tier steps, and a third exact step only if
// the residual entering the second exact step is still >= safety_threshold.
// No convergence loop.

#include <cmath>

#include "flashiv/normalization.hpp"
#include "flashiv/objective.hpp"
#include "flashiv/seeds.hpp"

namespace flashiv {

enum class Polish { Off, On };

struct SolverConfig {
    double safety_threshold = 1e-4;
    double upper_guard = kUpperGuard;
    Polish polish = Polish::Off;
    double seed_floor = kSeedFloor;

    /// Throws Error(DomainError) unless safety_threshold > 0, 0 < upper_guard < 1
    /// and seed_floor >= 1e-300.
    void validate() const;
};

/// residual is |f| at the entry of the last H3 step executed, i.e. the last
/// residual the fixed-count path evaluates (computing |f| at the returned v
/// would cost two more erfcx calls). It is 0 for the Bachelier branch and the
/// final |g| on ln(1 - c) for the upper branch.
///
/// The third exact step runs iff |f| at the entry of the second exact step is
/// >= safety_threshold.
struct SolverResult {
    double sigma = 0.0;
    double total_vol = 0.0;
    GuessBranch branch = GuessBranch::Fallback;
    int fast_steps = 0;
    int exact_steps = 0;
    bool safety_fired = false;
    double residual = 0.0;
    int halley_steps = 0;
    bool polished = false;
};

struct H3Step {
    double v_next;
    double f;  // residual at the input v
    bool newton_fallback;
};

/// One H3 update from a precomputed bundle:
///   eta = -f / l',  v + eta (1 + d2 eta / 2) / (1 + d2 eta + d3 eta^2 / 6).
/// Degenerate denominators or non-finite results fall back to v + eta; if that
/// is non-finite too, v is returned unchanged. The result is clamped at floor.
inline double h3_update(double v, const DerivativeBundle& b, double floor, bool& newton_fallback) noexcept {
    const double eta = -b.f * b.inv_lp;
    const double den = 1.0 + b.d2 * eta + b.d3 * eta * eta * (1.0 / 6.0);
    double v_next = v + eta * (1.0 + 0.5 * b.d2 * eta) / den;
    newton_fallback = false;
    if (den == 0.0 || !std::isfinite(v_next)) {
        newton_fallback = true;
        v_next = v + eta;
        if (!std::isfinite(v_next)) {
            v_next = v;
        }
    }
    return std::fmax(v_next, floor);
}

template <ErfcxTier Tier>
inline H3Step h3_step(double x, double v, double lnc_target, double floor = kSeedFloor) noexcept {
    const DerivativeBundle b = derivative_bundle<Tier>(x, v, lnc_target);
    bool fallback = false;
    const double v_next = h3_update(v, b, floor, fallback);
    return {v_next, b.f, fallback};
}

/// Checked single step. Throws Error(NonFiniteStep) when the H3 denominator is
/// zero or the update is not finite (the solver itself falls back to Newton
/// instead), plus the objective's own errors.
H3Step h3_step(double x, double v, double lnc_target, ErfcxTier tier);

SolverResult solve_normalized(const NormalizedQuote& q, const SolverConfig& cfg = {});
SolverResult solve_normalized(double x, double c, double expiry, const SolverConfig& cfg = {});

/// Three Halley steps on g(v) = ln(1 - c(x, v)) - ln(1 - c), starting from
/// max(v_seeded, upper_price_seed). Returns total volatility.
double upper_branch(const NormalizedQuote& q, double v_seeded);

/// Inversion for c <= 1e-6, |x| <= 1e-8 through a small-v expansion of the
/// price. Throws Error(DegenerateResult) if the inner solve does not settle.
double bachelier_limit_branch(const NormalizedQuote& q);

/// One Newton step against the double-double price: v - (P(v) - c) / phi(d1).
/// Returns v_in unchanged if phi(d1) underflows.
double polish_newton(const NormalizedQuote& q, double v_in);

SolverResult solve(const OptionQuote& quote, const SolverConfig& cfg = {});

}  // namespace flashiv
