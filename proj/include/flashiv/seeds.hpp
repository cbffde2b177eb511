#pragma once

// Initial guesses for the total volatility v and the dispatch that picks one.

#include <array>
#include <cmath>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <string_view>

#include "flashiv/math_kernels.hpp"
#include "flashiv/normalization.hpp"

namespace flashiv {

enum class GuessBranch { BachelierLimit, LiRational, NearAtmSmallPrice, UpperPrice, AsymptoticOtm, Fallback };

inline constexpr int kGuessBranchCount = 6;

std::string_view to_string(GuessBranch branch) noexcept;

/// Greatest double below 0.99. Prices at or above it use the complementary branch.
inline const double kUpperGuard = std::nextafter(0.99, 0.0);

inline constexpr double kSeedFloor = 1e-10;

inline constexpr double kBachelierMaxPrice = 1e-6;
inline constexpr double kBachelierMaxAbsX = 1e-8;
inline constexpr double kLiMaxAbsX = 3.0;
inline constexpr double kLiMinPrice = 0.0005;
inline constexpr double kLiMaxPrice = 0.9995;
inline constexpr double kNearAtmMaxAbsX = 0.01;
inline constexpr double kNearAtmMaxPrice = 0.0005;
inline constexpr double kAsymMaxPrice = 0.5;
inline constexpr double kAsymMaxLnPrice = -2.0;

/// Coefficients of the degree-(3,3) rational seed
///
///   v(x, c) = sum m_ij x^i c^j / sum n_ij x^i c^j,   i + j <= 3,
///
/// stored in the order m00 m01 m02 m03 m10 m11 m12 m20 m21 m30 (and the same for n).
struct LiCoefficients {
    std::array<double, 10> m{};
    std::array<double, 10> n{};

    /// The frozen fit shipped in data/li_coefficients.txt.
    static constexpr const LiCoefficients& builtin() noexcept;

    /// Parse 20 whitespace-separated values; '#' starts a comment.
    /// Throws Error(SchemaViolation) on a malformed fixture, IoError if unreadable.
    static LiCoefficients parse(std::istream& in);
    static LiCoefficients load(const std::filesystem::path& path);
};

namespace detail {

// Keep in sync with data/li_coefficients.txt (a test compares them).
inline constexpr LiCoefficients kBuiltinLi{
    {-0.0020386774984432372, 5.754653496620512, 6904.708337986697, -6743.595369394681, -0.6462199611190582,
     -2543.7514560558566, 2445.7168098021666, 19.892220547854606, -1.6310124265915997, 2.7833547287395493},
    {1.0, 2864.271208448671, -3663.5696346102227, 822.9359479415828, -51.55828488585257, -445.33849446195967,
     483.07098357368295, -3.103608121628319, 5.863766380251531, 0.596498193388942},
};

}  // namespace detail

constexpr const LiCoefficients& LiCoefficients::builtin() noexcept { return detail::kBuiltinLi; }

namespace detail {

// sum a_ij x^i c^j in the stored order, Horner in both variables.
inline double bivariate_cubic(const std::array<double, 10>& a, double x, double c) {
    const double a0 = a[0] + c * (a[1] + c * (a[2] + c * a[3]));
    const double a1 = a[4] + c * (a[5] + c * a[6]);
    const double a2 = a[7] + c * a[8];
    return a0 + x * (a1 + x * (a2 + x * a[9]));
}

}  // namespace detail

inline bool in_li_domain(double x, double c) noexcept {
    return std::fabs(x) < kLiMaxAbsX && c > kLiMinPrice && c < kLiMaxPrice;
}

/// Unchecked rational seed.
inline double li_rational(double x, double c, const LiCoefficients& k) noexcept {
    return detail::bivariate_cubic(k.m, x, c) / detail::bivariate_cubic(k.n, x, c);
}

/// Throws Error(DomainViolation) outside |x| < 3, 0.0005 < c < 0.9995.
double li_guess(double x, double c, const LiCoefficients& coeffs = LiCoefficients::builtin());

/// -2x / (D + sqrt(D^2 - 2x)), D = sqrt(-2 ln c - ln 2 pi). Unchecked.
inline double asym_otm_seed(double x, double lnc) noexcept {
    constexpr double kLn2Pi = 1.8378770664093454836;
    const double d = std::sqrt(-2.0 * lnc - kLn2Pi);
    return -2.0 * x / (d + std::sqrt(d * d - 2.0 * x));
}

/// Throws Error(GuardViolation) unless ln c < -2 (which also implies c <= 0.5).
double asym_otm_guess(double x, double lnc);

inline double near_atm_small_price_guess(double x, double c) noexcept {
    return std::sqrt(x * x + detail::kSqrt2Pi * detail::kSqrt2Pi * c * c);
}

/// Large-v seed from 1 - c ~ (1 + e^{-x}) Phi(-v/2), q = 1 - c.
inline double upper_price_seed(double x, double q) {
    const double p = std::fmax(q / (1.0 + std::exp(-x)), std::numeric_limits<double>::denorm_min());
    return -2.0 * norm_cdf_inv(p);
}

/// sqrt(2|x|), the point where d1 = 0, floored at 1e-10.
inline double fallback_guess(double x) noexcept { return std::fmax(std::sqrt(2.0 * std::fabs(x)), kSeedFloor); }

struct Guess {
    double v0;
    GuessBranch branch;
};

/// First-match dispatch:
///   (i)   c <= 1e-6 and |x| <= 1e-8           BachelierLimit
///   (ii)  |x| < 3 and 0.0005 < c < guard      LiRational
///   (iii) c <= 0.0005 and |x| < 0.01          NearAtmSmallPrice
///   (iv)  c >= guard                          UpperPrice
///   (v)   c <= 0.5 and ln c < -2              AsymptoticOtm
///   (vi)  otherwise                           Fallback
/// The returned seed is clamped at 1e-10. For UpperPrice the seed is the Li
/// or fallback seed lifted by upper_price_seed.
inline Guess dispatch_guess(double x, double c, double lnc, double upper_guard = kUpperGuard,
                           const LiCoefficients& coeffs = LiCoefficients::builtin()) {
    const double ax = std::fabs(x);
    Guess g{};
    if (c <= kBachelierMaxPrice && ax <= kBachelierMaxAbsX) {
        g = {near_atm_small_price_guess(x, c), GuessBranch::BachelierLimit};
    } else if (ax < kLiMaxAbsX && c > kLiMinPrice && c < upper_guard) {
        g = {li_rational(x, c, coeffs), GuessBranch::LiRational};
    } else if (c <= kNearAtmMaxPrice && ax < kNearAtmMaxAbsX) {
        g = {near_atm_small_price_guess(x, c), GuessBranch::NearAtmSmallPrice};
    } else if (c >= upper_guard) {
        const double base = in_li_domain(x, c) ? li_rational(x, c, coeffs) : fallback_guess(x);
        g = {std::fmax(base, upper_price_seed(x, 1.0 - c)), GuessBranch::UpperPrice};
    } else if (c <= kAsymMaxPrice && lnc < kAsymMaxLnPrice) {
        g = {asym_otm_seed(x, lnc), GuessBranch::AsymptoticOtm};
    } else {
        g = {fallback_guess(x), GuessBranch::Fallback};
    }
    g.v0 = std::fmax(g.v0, kSeedFloor);
    return g;
}


inline Guess dispatch_guess(const NormalizedQuote& q) { return dispatch_guess(q.x(), q.c(), q.lnc()); }

}  // namespace flashiv
