#pragma once

// Double-double arithmetic built from error-free transformations.
// A value is the unevaluated sum hi + lo with |lo| <= ulp(hi)/2, giving
// roughly 106 significant bits. Used only by the reference oracle.

#include <cmath>
#include <cstdint>
#include <limits>

namespace flashiv {

struct DoubleDouble {
    double hi = 0.0;
    double lo = 0.0;

    constexpr DoubleDouble() = default;
    constexpr DoubleDouble(double h) : hi(h), lo(0.0) {}  // NOLINT(google-explicit-constructor)
    constexpr DoubleDouble(double h, double l) : hi(h), lo(l) {}

    [[nodiscard]] double to_double() const { return hi + lo; }
};

namespace dd {

inline DoubleDouble two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    const double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline DoubleDouble quick_two_sum(double a, double b) {
    const double s = a + b;
    return {s, b - (s - a)};
}

inline DoubleDouble two_prod(double a, double b) {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

// Constants carried to full double-double precision.
inline constexpr DoubleDouble kLn2{0.6931471805599453, 2.3190468138462996e-17};
inline constexpr DoubleDouble kTwoOverSqrtPi{1.1283791670955126, 1.533545961316588e-17};
inline constexpr DoubleDouble kOneOverSqrtPi{0.5641895835477563, 7.66772980658294e-18};
inline constexpr DoubleDouble kSqrtHalf{0.7071067811865476, -4.833646656726457e-17};
inline constexpr DoubleDouble kInvSqrt2Pi{0.3989422804014327, -2.49232720227773e-17};

}  // namespace dd

inline DoubleDouble operator-(DoubleDouble a) { return {-a.hi, -a.lo}; }

inline DoubleDouble operator+(DoubleDouble a, DoubleDouble b) {
    DoubleDouble s = dd::two_sum(a.hi, b.hi);
    const DoubleDouble t = dd::two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = dd::quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return dd::quick_two_sum(s.hi, s.lo);
}

inline DoubleDouble operator-(DoubleDouble a, DoubleDouble b) { return a + (-b); }

inline DoubleDouble operator*(DoubleDouble a, DoubleDouble b) {
    DoubleDouble p = dd::two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return dd::quick_two_sum(p.hi, p.lo);
}

inline DoubleDouble operator/(DoubleDouble a, DoubleDouble b) {
    // Long division with two correction quotients.
    const double q1 = a.hi / b.hi;
    DoubleDouble r = a - b * DoubleDouble(q1);
    const double q2 = r.hi / b.hi;
    r = r - b * DoubleDouble(q2);
    const double q3 = r.hi / b.hi;
    DoubleDouble q = dd::quick_two_sum(q1, q2);
    return q + DoubleDouble(q3);
}

inline DoubleDouble& operator+=(DoubleDouble& a, DoubleDouble b) { return a = a + b; }
inline DoubleDouble& operator-=(DoubleDouble& a, DoubleDouble b) { return a = a - b; }
inline DoubleDouble& operator*=(DoubleDouble& a, DoubleDouble b) { return a = a * b; }
inline DoubleDouble& operator/=(DoubleDouble& a, DoubleDouble b) { return a = a / b; }

inline bool operator<(DoubleDouble a, DoubleDouble b) { return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo); }
inline bool operator>(DoubleDouble a, DoubleDouble b) { return b < a; }
inline bool operator<=(DoubleDouble a, DoubleDouble b) { return !(b < a); }
inline bool operator>=(DoubleDouble a, DoubleDouble b) { return !(a < b); }
inline bool operator==(DoubleDouble a, DoubleDouble b) { return a.hi == b.hi && a.lo == b.lo; }

namespace dd {

inline DoubleDouble abs(DoubleDouble a) { return a.hi < 0.0 ? -a : a; }

inline DoubleDouble ldexp(DoubleDouble a, int e) { return {std::ldexp(a.hi, e), std::ldexp(a.lo, e)}; }

inline DoubleDouble square(DoubleDouble a) { return a * a; }

inline DoubleDouble sqrt(DoubleDouble a) {
    if (a.hi <= 0.0) {
        return DoubleDouble(0.0);
    }
    const double x = 1.0 / std::sqrt(a.hi);
    const double ax = a.hi * x;
    const DoubleDouble diff = a - two_prod(ax, ax);
    return two_sum(ax, diff.hi * (x * 0.5));
}

inline DoubleDouble exp(DoubleDouble a) {
    if (a.hi > 709.7) {
        return DoubleDouble(std::numeric_limits<double>::infinity());
    }
    if (a.hi < -745.2) {
        return DoubleDouble(0.0);
    }
    // a = k ln2 + r, then exp(r) = (exp(r / 2^10))^(2^10).
    const double k = std::nearbyint(a.hi / kLn2.hi);
    DoubleDouble r = a - kLn2 * DoubleDouble(k);
    r = ldexp(r, -10);
    // Taylor series for expm1(r); |r| < 3.4e-4 so 12 terms exceed 106 bits.
    DoubleDouble term = r;
    DoubleDouble sum = r;
    for (int n = 2; n <= 12; ++n) {
        term = term * r / DoubleDouble(static_cast<double>(n));
        sum += term;
    }
    // (1 + s)^2 - 1 = s (2 + s) keeps the small part accurate while squaring.
    for (int i = 0; i < 10; ++i) {
        sum = sum * (DoubleDouble(2.0) + sum);
    }
    return ldexp(sum + DoubleDouble(1.0), static_cast<int>(k));
}

inline DoubleDouble expm1(DoubleDouble a) {
    if (std::fabs(a.hi) > 0.5) {
        return exp(a) - DoubleDouble(1.0);
    }
    DoubleDouble term = a;
    DoubleDouble sum = a;
    for (int n = 2; n <= 40; ++n) {
        term = term * a / DoubleDouble(static_cast<double>(n));
        sum += term;
        if (std::fabs(term.hi) <= 1e-34 * std::fabs(sum.hi)) {
            break;
        }
    }
    return sum;
}

inline DoubleDouble log(DoubleDouble a) {
    if (a.hi <= 0.0) {
        return DoubleDouble(-std::numeric_limits<double>::infinity());
    }
    // One Newton step on exp(y) = a doubles the accuracy of the double seed.
    DoubleDouble y(std::log(a.hi));
    y = y + a * exp(-y) - DoubleDouble(1.0);
    return y;
}

}  // namespace dd
}  // namespace flashiv
