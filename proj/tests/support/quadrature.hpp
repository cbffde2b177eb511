#pragma once

// Independent price check: the Black integral evaluated by exp-sinh
// quadrature in double-double arithmetic. Shares no code with the oracle's
// erfcx path.
//
// With z0 = -x/v + v/2 (the standardised log-strike),
//
//   c(x, v) = e^{-x - z0^2/2} / sqrt(2 pi) * int_0^inf e^{-z0 u - u^2/2} expm1(v u) du.

#include <cmath>
#include <initializer_list>

#include "flashiv/double_double.hpp"

namespace flashiv::testing {

inline DoubleDouble black_price_quadrature(double x, double v, int levels = 7) {
    using DD = DoubleDouble;
    const DD half_pi{1.5707963267948966, 6.123233995736766e-17};
    const DD z0 = -(DD(x) / DD(v)) + DD(0.5 * v);
    // Nodes u = L exp(pi/2 sinh t) with L near the integrand's scale.
    const DD scale = DD(1.0) / (DD(1.0) + z0);
    const double step = std::ldexp(1.0, -levels);
    const auto term = [&](double t) {
        const DD et = dd::exp(DD(t));
        const DD inv_et = DD(1.0) / et;
        const DD sinh_t = dd::ldexp(et - inv_et, -1);
        const DD cosh_t = dd::ldexp(et + inv_et, -1);
        const DD e = dd::exp(half_pi * sinh_t);
        const DD u = scale * e;
        const DD weight = scale * e * half_pi * cosh_t;
        const DD exponent = -(z0 * u) - dd::ldexp(u * u, -1);
        if (exponent.hi < -740.0) {
            return DD(0.0);
        }
        const DD f = dd::exp(exponent) * dd::expm1(DD(v) * u);
        return f * weight;
    };
    DD sum = term(0.0);
    for (int sign : {1, -1}) {
        for (int k = 1; k < 4096; ++k) {
            const DD t_k = term(sign * k * step);
            sum += t_k;
            if (k > 8 && std::fabs(t_k.hi) <= 1e-36 * std::fabs(sum.hi)) {
                break;
            }
        }
    }
    const DD prefactor = dd::exp(-DD(x) - dd::ldexp(z0 * z0, -1)) * dd::kInvSqrt2Pi;
    return prefactor * sum * DD(step);
}

}  // namespace flashiv::testing
