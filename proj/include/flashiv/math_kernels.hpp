#pragma once

// Scaled complementary error function erfcx(z) = exp(z^2) erfc(z) in two
// accuracy tiers, plus the standard normal density, distribution and quantile.
//
// Everything here is header-inline: these kernels sit on the solver hot path.

#include <cmath>
#include <limits>

namespace flashiv {

enum class ErfcxTier { Fast, Exact };

namespace detail {

inline constexpr double kSqrtPi = 1.7724538509055160273;
inline constexpr double kOneOverSqrtPi = 0.56418958354775628695;
inline constexpr double kOneOverSqrt2 = 0.70710678118654752440;
inline constexpr double kOneOverSqrt2Pi = 0.39894228040143267794;
inline constexpr double kSqrt2Pi = 2.50662827463100050242;

// exp(a * a) with the square split so that large |a| does not amplify the
// rounding of a * a (Cody's 1/16 truncation trick).
inline double exp_of_square(double a) {
    const double a16 = std::trunc(a * 16.0) / 16.0;
    const double del = (a - a16) * (a + a16);
    return std::exp(a16 * a16) * std::exp(del);
}

// exp(-z^2 / 2) with z^2 evaluated exactly via fma.
inline double exp_minus_half_square(double z) {
    const double z2 = z * z;
    const double z2_err = std::fma(z, z, -z2);
    return std::exp(-0.5 * z2) * (1.0 - 0.5 * z2_err);
}

}  // namespace detail

/// Full-precision erfcx via W. J. Cody's rational Chebyshev approximations
/// (three ranges on |z|) and the reflection erfcx(z) = 2 exp(z^2) - erfcx(-z)
/// for negative z. For z < -26.628, 2 exp(z^2) overflows and the result is
/// +infinity.
inline double erfcx_exact(double z) {
    constexpr double a[5] = {3.1611237438705656, 113.864154151050156, 377.485237685302021, 3209.37758913846947,
                             0.185777706184603153};
    constexpr double b[4] = {23.6012909523441209, 244.024637934444173, 1282.61652607737228, 2844.23683343917062};
    constexpr double c[9] = {0.564188496988670089, 8.88314979438837594, 66.1191906371416295,
                             298.635138197400131,  881.95222124176909,  1712.04761263407058,
                             2051.07837782607147,  1230.33935479799725, 2.15311535474403846e-8};
    constexpr double d[8] = {15.7449261107098347, 117.693950891312499, 537.181101862009858, 1621.38957456669019,
                             3290.79923573345963, 4362.61909014324716, 3439.36767414372164, 1230.33935480374942};
    constexpr double p[6] = {0.305326634961232344, 0.360344899949804439,  0.125781726111229246,
                             0.0160837851487422766, 6.58749161529837803e-4, 0.0163153871373020978};
    constexpr double q[5] = {2.56852019228982242, 1.87295284992346047, 0.527905102951428412,
                             0.0605183413124413191, 0.00233520497626869185};
    constexpr double kThresh = 0.46875;
    constexpr double kXneg = -26.628;
    constexpr double kXhuge = 6.71e7;

    const double y = std::fabs(z);
    double result;
    if (y <= kThresh) {
        const double ysq = y > 1.11e-16 ? y * y : 0.0;
        double xnum = a[4] * ysq;
        double xden = ysq;
        for (int i = 0; i < 3; ++i) {
            xnum = (xnum + a[i]) * ysq;
            xden = (xden + b[i]) * ysq;
        }
        const double erf_z = z * (xnum + a[3]) / (xden + b[3]);
        return std::exp(ysq) * (1.0 - erf_z);
    }
    if (y <= 4.0) {
        double xnum = c[8] * y;
        double xden = y;
        for (int i = 0; i < 7; ++i) {
            xnum = (xnum + c[i]) * y;
            xden = (xden + d[i]) * y;
        }
        result = (xnum + c[7]) / (xden + d[7]);
    } else if (y >= kXhuge) {
        result = detail::kOneOverSqrtPi / y;
    } else {
        const double ysq = 1.0 / (y * y);
        double xnum = p[5] * ysq;
        double xden = ysq;
        for (int i = 0; i < 4; ++i) {
            xnum = (xnum + p[i]) * ysq;
            xden = (xden + q[i]) * ysq;
        }
        result = ysq * (xnum + p[4]) / (xden + q[4]);
        result = (detail::kOneOverSqrtPi - result) / y;
    }
    if (z < 0.0) {
        if (z < kXneg) {
            return std::numeric_limits<double>::infinity();
        }
        const double e = detail::exp_of_square(z);
        result = (e + e) - result;
    }
    return result;
}

/// Cheap erfcx (about 2.5 significant digits): Abramowitz & Stegun 7.1.26 on
/// [0, 2.5), the four-term asymptotic series on [2.5, inf), and literal
/// reflection for z < 0.
inline double erfcx_fast(double z) {
    if (z < 0.0) {
        return 2.0 * std::exp(z * z) - erfcx_fast(-z);
    }
    if (z >= 2.5) {
        const double r = 1.0 / z;
        const double r2 = r * r;
        return detail::kOneOverSqrtPi * r * (1.0 + r2 * (-0.5 + r2 * (0.75 - r2 * 1.875)));
    }
    const double t = 1.0 / (1.0 + 0.3275911 * z);
    return t * (0.254829592 + t * (-0.284496736 + t * (1.421413741 + t * (-1.453152027 + t * 1.061405429))));
}

template <ErfcxTier Tier>
inline double erfcx(double z) {
    if constexpr (Tier == ErfcxTier::Fast) {
        return erfcx_fast(z);
    } else {
        return erfcx_exact(z);
    }
}

inline double erfcx(double z, ErfcxTier tier) { return tier == ErfcxTier::Fast ? erfcx_fast(z) : erfcx_exact(z); }

inline double norm_pdf(double z) { return detail::kOneOverSqrt2Pi * detail::exp_minus_half_square(z); }

/// Phi(z) = erfc(-z / sqrt 2) / 2, written through erfcx so the lower tail
/// stays accurate until the result itself underflows (z below about -37.5).
inline double norm_cdf(double z) {
    if (z < 0.0) {
        return 0.5 * detail::exp_minus_half_square(z) * erfcx_exact(-z * detail::kOneOverSqrt2);
    }
    return 1.0 - 0.5 * detail::exp_minus_half_square(z) * erfcx_exact(z * detail::kOneOverSqrt2);
}

/// Inverse of Phi: Wichura's AS241 followed by one Halley step on Phi.
/// Throws Error(DomainError) unless 0 < p < 1.
double norm_cdf_inv(double p);

}  // namespace flashiv
