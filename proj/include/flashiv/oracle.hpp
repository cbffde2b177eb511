#pragma once

// Reference-grade Black pricing and inversion in double-double arithmetic.
// Test and CLI use only; nothing here is on the solver hot path.

#include "flashiv/double_double.hpp"

namespace flashiv {

/// erfcx in double-double, relative error around 1e-27 or better on the
/// arguments the Black decomposition produces.
DoubleDouble erfcx_hi(DoubleDouble z);

/// erfcx(a - d) - erfcx(a + d) for d > 0 without cancellation when d << a.
DoubleDouble erfcx_difference_hi(DoubleDouble a, DoubleDouble d);

/// Normalised OTM call price c(x, v) with x <= 0, v > 0. May underflow to 0
/// for extreme inputs; use log_black_price_hi there.
DoubleDouble black_price_hi(double x, double v);

/// 1 - c(x, v), accurate in relative terms when c is close to 1.
DoubleDouble complementary_price_hi(double x, double v);

/// ln c(x, v), finite wherever the erfcx difference is representable.
DoubleDouble log_black_price_hi(double x, double v);

/// Total volatility whose price is closest to c, found by bisection on the
/// bit patterns of v until the bracket holds two adjacent doubles.
/// Throws Error(BracketFailure) if c is not attained (or c outside (0, 1)).
double iv_reference(double x, double c);

/// Same bisection against an unrounded double-double price.
double iv_reference(double x, DoubleDouble c);

/// |v_hat - v_ref| in units of the spacing of doubles above v_ref.
double ulp_error(double v_hat, double v_ref);

struct ReferenceCase {
    double x;
    double v_ref;
    double c_ref;
};

/// c_ref is black_price_hi rounded to double.
ReferenceCase make_reference_case(double x, double v_ref);

}  // namespace flashiv
