#pragma once

// Log-price objective in erfcx-factored form and the derivative ratios that
// drive a third-order Householder step.
//
// With h = x / v and t = v / 2 the normalised Black price satisfies
//
//   ln c = -(h^2 + t^2) / 2 - ln 2 - x / 2 + ln(N+ - N-),
//   N+ = erfcx(-(h + t) / sqrt 2),  N- = erfcx(-(h - t) / sqrt 2),
//
// which stays finite long after c itself underflows. The derivatives of
// l(v) = ln c(x, v) need nothing beyond N+ - N-:
//
//   l'        = sqrt(2 / pi) / (N+ - N-)
//   l'' / l'  = (h + t)(h - t) / v - l'
//   l''' / l' = (-3h^2 - t^2 + (h^2 - t^2)^2) / v^2 - 3 l' (l'' / l') - l'^2

#include <cmath>

#include "flashiv/math_kernels.hpp"

namespace flashiv {

struct HtCoords {
    double h;
    double t;
};

/// h = x / v and t = v / 2; x == 0 maps to h == 0 without dividing.
inline HtCoords ht_coords(double x, double v) { return {x == 0.0 ? 0.0 : x / v, 0.5 * v}; }

struct LogPrice {
    double lnc;
    double n_plus;
    double n_minus;
};

/// f = l(v) - ln c_target together with l' and the two ratios used by H3.
struct DerivativeBundle {
    double f;
    double lp;
    double d2;
    double d3;
    double inv_lp;  // 1 / l', kept so the step needs no division by l'
};

/// Below this the objective refuses to evaluate; the solver clamps at 1e-10.
inline constexpr double kMinObjectiveVolatility = 1e-300;

namespace detail {
inline constexpr double kLn2 = 0.69314718055994530942;
inline constexpr double kSqrtTwoOverPi = 0.79788456080286535588;
inline constexpr double kSqrtPiOverTwo = 1.25331413731550025121;
}  // namespace detail

/// Unchecked hot-path evaluation. Requires v > 0 and x <= 0.
template <ErfcxTier Tier>
inline LogPrice log_price(double x, double v) {
    const auto [h, t] = ht_coords(x, v);
    const double n_plus = erfcx<Tier>(-(h + t) * detail::kOneOverSqrt2);
    const double n_minus = erfcx<Tier>(-(h - t) * detail::kOneOverSqrt2);
    // A difference that underflows to zero gives -inf; the caller's step
    // arithmetic turns that into a non-finite update.
    const double lnc = -0.5 * (h * h + t * t) - detail::kLn2 - 0.5 * x + std::log(n_plus - n_minus);
    return {lnc, n_plus, n_minus};
}

template <ErfcxTier Tier>
inline DerivativeBundle derivative_bundle(double x, double v, double lnc_target) {
    const auto [h, t] = ht_coords(x, v);
    const double n_plus = erfcx<Tier>(-(h + t) * detail::kOneOverSqrt2);
    const double n_minus = erfcx<Tier>(-(h - t) * detail::kOneOverSqrt2);
    const double diff = n_plus - n_minus;
    const double h2 = h * h;
    const double t2 = t * t;
    const double lnc = -0.5 * (h2 + t2) - detail::kLn2 - 0.5 * x + std::log(diff);
    const double lp = detail::kSqrtTwoOverPi / diff;
    const double d2 = (h + t) * (h - t) / v - lp;
    const double h2_minus_t2 = h2 - t2;
    const double d3 = (-3.0 * h2 - t2 + h2_minus_t2 * h2_minus_t2) / (v * v) - 3.0 * lp * d2 - lp * lp;
    return {lnc - lnc_target, lp, d2, d3, diff * detail::kSqrtPiOverTwo};
}

/// Checked evaluation: throws Error(DegenerateVolatility) when v is below
/// 1e-300 or not finite, Error(DomainError) when x > 0.
LogPrice log_price(double x, double v, ErfcxTier tier);

/// Checked evaluation; same error contract as the checked log_price.
DerivativeBundle derivative_bundle(double x, double v, double lnc_target, ErfcxTier tier);

}  // namespace flashiv
