#include "flashiv/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

#include "flashiv/error.hpp"
#include "flashiv/seeds.hpp"

namespace flashiv {

namespace {

using DD = DoubleDouble;

// e^{z^2} erf(z) = 2/sqrt(pi) sum_n 2^n z^{2n+1} / (1 3 5 ... (2n+1)).
DD erfcx_series(DD z) {
    const DD two_z2 = DD(2.0) * z * z;
    DD term = z;
    DD sum = z;
    for (int n = 1; n < 400; ++n) {
        term = term * two_z2 / DD(2.0 * n + 1.0);
        sum += term;
        if (std::fabs(term.hi) < 1e-35 * std::fabs(sum.hi)) {
            break;
        }
    }
    return dd::exp(z * z) - dd::kTwoOverSqrtPi * sum;
}

// Laplace continued fraction 1/sqrt(pi) / (z + (1/2)/(z + 1/(z + (3/2)/(z + ...)))).
DD erfcx_continued_fraction(DD z) {
    const int terms = 30 + static_cast<int>(1200.0 / (z.hi * z.hi));
    DD tail(0.0);
    for (int k = terms; k >= 1; --k) {
        tail = DD(0.5 * k) / (z + tail);
    }
    return dd::kOneOverSqrtPi / (z + tail);
}

// Odd Taylor coefficients y^(k)(a) / k! of erfcx at a, for k = 1, 3, ..., 2 * count - 1.
// Small a: forward recurrence y^(n+1) = 2a y^(n) + 2n y^(n-1). The recurrence is
// unstable for large a, but the caller only uses it when a * delta is small, so
// the growing error is multiplied by a vanishing power of delta.
template <std::size_t N>
void odd_taylor_coefficients(DD a, std::array<DD, N>& out) {
    if (a.hi < 20.0) {
        DD prev = erfcx_hi(a);
        DD cur = DD(2.0) * a * prev - dd::kTwoOverSqrtPi;
        DD factorial(1.0);
        for (std::size_t n = 1; n <= 2 * N - 1; ++n) {
            if (n % 2 == 1) {
                out[n / 2] = cur / factorial;
            }
            const DD next = DD(2.0) * a * cur + DD(2.0 * static_cast<double>(n)) * prev;
            prev = cur;
            cur = next;
            factorial *= DD(static_cast<double>(n + 1));
        }
        return;
    }
    // Large a: differentiate the asymptotic series
    // erfcx(a) ~ 1/sqrt(pi) sum_m (-1)^m (2m-1)!! / 2^m a^{-(2m+1)} term by term.
    const DD inv_a = DD(1.0) / a;
    const DD inv_a2 = inv_a * inv_a;
    for (std::size_t j = 0; j < N; ++j) {
        const int k = static_cast<int>(2 * j + 1);
        DD sum(0.0);
        DD coeff(1.0);   // (-1)^m (2m-1)!! / 2^m
        DD power = inv_a;  // a^{-(2m+1)}
        for (int m = 0; m < 200; ++m) {
            // d^k/da^k a^{-p} = (-1)^k p (p+1) ... (p+k-1) a^{-p-k}; the k! is divided out here.
            const int p = 2 * m + 1;
            DD rising(1.0);
            for (int i = 0; i < k; ++i) {
                rising *= DD(static_cast<double>(p + i)) / DD(static_cast<double>(i + 1));
            }
            const DD term = coeff * rising * power;
            sum += term;
            if (std::fabs(term.hi) < 1e-35 * std::fabs(sum.hi)) {
                break;
            }
            coeff = coeff * DD(-(2.0 * m + 1.0) * 0.5);
            power = power * inv_a2;
        }
        DD ak(1.0);
        for (int i = 0; i < k; ++i) {
            ak = ak * inv_a;
        }
        out[j] = -(dd::kOneOverSqrtPi * sum * ak);  // odd k flips the sign
    }
}

struct BlackCoords {
    DD h;
    DD t;
    DD d1;
};

BlackCoords coords(double x, double v) {
    const DD h = x == 0.0 ? DD(0.0) : DD(x) / DD(v);
    const DD t = DD(0.5 * v);
    return {h, t, h + t};
}

// 1 - c as Phi(-d1) + e^{-x} Phi(d2) = e^{-d1^2/2}/2 [erfcx(d1/sqrt2) + erfcx(-d2/sqrt2)].
DD complement_sum(const BlackCoords& b) {
    const DD d2 = b.h - b.t;
    const DD s = erfcx_hi(b.d1 * dd::kSqrtHalf) + erfcx_hi(-d2 * dd::kSqrtHalf);
    return dd::ldexp(dd::exp(-dd::ldexp(b.d1 * b.d1, -1)) * s, -1);
}

DD difference(const BlackCoords& b) { return erfcx_difference_hi(-b.h * dd::kSqrtHalf, b.t * dd::kSqrtHalf); }

// Above d1 = 2 the price is at least 0.95 and 1 - c is the accurate quantity.
constexpr double kComplementD1 = 2.0;

DD log1m(DD q) {
    if (q.hi < 1e-6) {
        DD power = q;
        DD sum = q;
        for (int k = 2; k <= 7; ++k) {
            power *= q;
            sum += power / DD(static_cast<double>(k));
        }
        return -sum;
    }
    return dd::log(DD(1.0) - q);
}

}  // namespace

DD erfcx_hi(DD z) {
    if (z.hi < 0.0) {
        return DD(2.0) * dd::exp(z * z) - erfcx_hi(-z);
    }
    if (z.hi <= 2.0) {
        return erfcx_series(z);
    }
    return erfcx_continued_fraction(z);
}

DD erfcx_difference_hi(DD a, DD d) {
    const double scale = std::max(a.hi, 1.0);
    if (d.hi * 2000.0 >= scale) {
        return erfcx_hi(a - d) - erfcx_hi(a + d);
    }
    // erfcx(a - d) - erfcx(a + d) = -2 sum_{k odd} y^(k)(a) d^k / k!
    std::array<DD, 12> coeff;
    odd_taylor_coefficients(a, coeff);
    const DD d2 = d * d;
    DD power = d;
    DD sum(0.0);
    for (const DD& ck : coeff) {
        const DD term = ck * power;
        sum += term;
        if (std::fabs(term.hi) < 1e-35 * std::fabs(sum.hi)) {
            break;
        }
        power *= d2;
    }
    return DD(-2.0) * sum;
}

// Past this |h| the price is far below the smallest double and the
// double-double arithmetic would overflow.
constexpr double kMaxAbsH = 1e150;

DD black_price_hi(double x, double v) {
    const BlackCoords b = coords(x, v);
    if (std::fabs(b.h.hi) > kMaxAbsH) {
        return DD(0.0);
    }
    if (b.d1.hi >= kComplementD1) {
        return DD(1.0) - complement_sum(b);
    }
    return dd::ldexp(dd::exp(-dd::ldexp(b.d1 * b.d1, -1)) * difference(b), -1);
}

DD complementary_price_hi(double x, double v) {
    const BlackCoords b = coords(x, v);
    if (b.d1.hi >= kComplementD1) {
        return complement_sum(b);
    }
    return DD(1.0) - black_price_hi(x, v);
}

DD log_black_price_hi(double x, double v) {
    const BlackCoords b = coords(x, v);
    if (b.d1.hi >= kComplementD1) {
        return log1m(complement_sum(b));
    }
    const DD diff = std::fabs(b.h.hi) > kMaxAbsH ? DD(0.0) : difference(b);
    if (!(diff.hi > 0.0)) {
        return DD(-std::numeric_limits<double>::infinity());
    }
    // -(h^2 + t^2)/2 - x/2 = -d1^2/2 since h t = x/2.
    return -dd::ldexp(b.d1 * b.d1, -1) - dd::kLn2 + dd::log(diff);
}

double iv_reference(double x, DD c) {
    if (!(c.hi > 0.0 && c.hi < 1.0) || !(x <= 0.0) || !std::isfinite(x)) {
        throw Error(ErrorCode::BracketFailure, "iv_reference: need x <= 0 and 0 < c < 1");
    }
    const DD target_log = dd::log(c);
    // below(v) <=> price(v) < c. Log prices keep tiny c comparable; near 1 the
    // plain price is better conditioned.
    const bool upper_half = c.hi > 0.5;
    auto below = [&](double v) {
        if (upper_half) {
            return black_price_hi(x, v) < c;
        }
        const DD l = log_black_price_hi(x, v);
        return !(l >= target_log);
    };
    auto distance = [&](double v) {
        const DD diff = upper_half ? black_price_hi(x, v) - c : log_black_price_hi(x, v) - target_log;
        return dd::abs(diff);
    };

    double lo = std::max(1e-300, std::fabs(x) * 1e-140);
    if (!below(lo)) {
        throw Error(ErrorCode::BracketFailure, "iv_reference: price below the smallest bracketed volatility");
    }
    double hi = 4.0 * std::max({upper_price_seed(x, (DD(1.0) - c).to_double()), fallback_guess(x), 1e-3});
    while (below(hi)) {
        hi *= 2.0;
        if (hi > 1e4) {
            throw Error(ErrorCode::BracketFailure, "iv_reference: price not attained");
        }
    }
    auto lo_bits = std::bit_cast<std::uint64_t>(lo);
    auto hi_bits = std::bit_cast<std::uint64_t>(hi);
    while (hi_bits - lo_bits > 1) {
        const std::uint64_t mid = lo_bits + (hi_bits - lo_bits) / 2;
        if (below(std::bit_cast<double>(mid))) {
            lo_bits = mid;
        } else {
            hi_bits = mid;
        }
    }
    lo = std::bit_cast<double>(lo_bits);
    hi = std::bit_cast<double>(hi_bits);
    return distance(lo) < distance(hi) ? lo : hi;
}

double iv_reference(double x, double c) { return iv_reference(x, DD(c)); }

double ulp_error(double v_hat, double v_ref) {
    const double spacing = std::nextafter(v_ref, std::numeric_limits<double>::infinity()) - v_ref;
    return std::fabs(v_hat - v_ref) / spacing;
}

ReferenceCase make_reference_case(double x, double v_ref) {
    return {x, v_ref, black_price_hi(x, v_ref).to_double()};
}

}  // namespace flashiv
