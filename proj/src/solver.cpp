#include "flashiv/solver.hpp"

#include <algorithm>
#include <cmath>

#include "flashiv/error.hpp"
#include "flashiv/oracle.hpp"

namespace flashiv {

void SolverConfig::validate() const {
    if (!(safety_threshold > 0.0)) {
        throw Error(ErrorCode::DomainError, "safety_threshold must be positive");
    }
    if (!(upper_guard > 0.0 && upper_guard < 1.0)) {
        throw Error(ErrorCode::DomainError, "upper_guard must lie in (0, 1)");
    }
    if (!(seed_floor >= kMinObjectiveVolatility) || !std::isfinite(seed_floor)) {
        throw Error(ErrorCode::DomainError, "seed_floor must be at least 1e-300");
    }
}

H3Step h3_step(double x, double v, double lnc_target, ErfcxTier tier) {
    const DerivativeBundle b = derivative_bundle(x, v, lnc_target, tier);
    const double eta = -b.f * b.inv_lp;
    const double den = 1.0 + b.d2 * eta + b.d3 * eta * eta * (1.0 / 6.0);
    const double v_next = v + eta * (1.0 + 0.5 * b.d2 * eta) / den;
    if (den == 0.0 || !std::isfinite(v_next)) {
        throw Error(ErrorCode::NonFiniteStep, "H3 update is not finite");
    }
    return {std::fmax(v_next, kSeedFloor), b.f, false};
}

namespace {

// Small-v expansion around the money, valid for m = -x <= 1e-8 and v << 1:
//
//   c = v [B(u) expm1(m)/m - v^2 phi(u) / 24] + O(v^5, m v^3),  u = m / v,
//   B(u) = phi(u) - u Phi(-u).
//
// ratio_b returns B(u) / phi(u).
double ratio_b(double u) {
    if (u <= 2.0) {
        const double mills = 1.2533141373155002512 * erfcx_exact(u * detail::kOneOverSqrt2);
        return 1.0 - u * mills;
    }
    // B / phi = K / (u + K), K = 1 / (u + 2 / (u + 3 / (u + ...))).
    double tail = 0.0;
    for (int k = 200; k >= 2; --k) {
        tail = k / (u + tail);
    }
    const double kk = 1.0 / (u + tail);
    return kk / (u + kk);
}

struct SmallVolPrice {
    double log_price;
    double dlog_dlogv;
};

SmallVolPrice small_vol_price(double m, double v) {
    const double u = m / v;
    const double e = m == 0.0 ? 1.0 : std::expm1(m) / m;
    const double v2 = v * v;
    const double bracket = ratio_b(u) * e - v2 / 24.0;
    const double log_phi = -0.5 * u * u - 0.91893853320467274178;
    const double slope = (e - (3.0 * v2 + m * m) / 24.0) / bracket;
    return {std::log(v) + log_phi + std::log(bracket), slope};
}

}  // namespace

double bachelier_limit_branch(const NormalizedQuote& q) {
    const double c = q.c();
    const double m = q.m();
    // At the money the expansion inverts in closed form.
    const double v_atm = detail::kSqrt2Pi * c * (1.0 + 0.26179938779914943654 * c * c);
    if (m == 0.0) {
        return v_atm;
    }
    // The price decreases in m, so the at-the-money root brackets from below.
    const double target = q.lnc();
    double lo = v_atm;
    double hi = 2.0 * v_atm;
    for (int i = 0; i < 200 && small_vol_price(m, hi).log_price < target; ++i) {
        hi *= 2.0;
    }
    double v = std::sqrt(lo * hi);
    for (int i = 0; i < 200; ++i) {
        const SmallVolPrice p = small_vol_price(m, v);
        const double g = p.log_price - target;
        if (g == 0.0) {
            return v;
        }
        (g < 0.0 ? lo : hi) = v;
        // Newton in ln v, bisection in ln v if it leaves the bracket.
        double next = v * std::exp(-g / p.dlog_dlogv);
        if (!(next > lo && next < hi)) {
            next = std::sqrt(lo * hi);
        }
        if (std::fabs(next - v) <= 2e-16 * v || hi - lo <= 4e-16 * lo) {
            return next;
        }
        v = next;
    }
    throw Error(ErrorCode::DegenerateResult, "Bachelier-limit inversion did not settle");
}

double upper_branch(const NormalizedQuote& q, double v_seeded) {
    const double x = q.x();
    const double q_target = 1.0 - q.c();
    const double g_target = std::log(q_target);
    double v = std::fmax(v_seeded, upper_price_seed(x, q_target));
    for (int step = 0; step < 3; ++step) {
        const auto [h, t] = ht_coords(x, v);
        const double d1 = h + t;
        // 1 - c = e^{-d1^2/2} / 2 [erfcx(d1 / sqrt2) + erfcx((t - h) / sqrt2)]
        const double s = erfcx_exact(d1 * detail::kOneOverSqrt2) + erfcx_exact((t - h) * detail::kOneOverSqrt2);
        const double g = -0.5 * d1 * d1 - detail::kLn2 + std::log(s) - g_target;
        const double g1 = -detail::kSqrtTwoOverPi / s;  // q' / q with q' = -phi(d1)
        const double g2 = -g1 * d1 * (t - h) / v - g1 * g1;
        double next = v - 2.0 * g * g1 / (2.0 * g1 * g1 - g * g2);
        if (!std::isfinite(next) || next <= 0.0) {
            next = v - g / g1;
        }
        if (!std::isfinite(next) || next <= 0.0) {
            next = 0.5 * v;
        }
        v = next;
    }
    return v;
}

double polish_newton(const NormalizedQuote& q, double v_in) {
    const double x = q.x();
    const double vega = norm_pdf(x / v_in + 0.5 * v_in);
    if (vega == 0.0) {
        return v_in;
    }
    const double diff = (black_price_hi(x, v_in) - DoubleDouble(q.c())).to_double();
    const double v_out = v_in - diff / vega;
    return std::isfinite(v_out) && v_out > 0.0 ? v_out : v_in;
}

SolverResult solve_normalized(const NormalizedQuote& q, const SolverConfig& cfg) {
    const double x = q.x();
    const double c = q.c();
    const double lnc = q.lnc();
    const double root_t = std::sqrt(q.expiry());
    SolverResult r;

    if (c <= kBachelierMaxPrice && std::fabs(x) <= kBachelierMaxAbsX) {
        r.branch = GuessBranch::BachelierLimit;
        r.total_vol = bachelier_limit_branch(q);
    } else {
        const Guess g = dispatch_guess(x, c, lnc, cfg.upper_guard);
        r.branch = g.branch;
        const double v0 = std::fmax(g.v0, cfg.seed_floor);
        if (c >= cfg.upper_guard) {
            r.total_vol = upper_branch(q, v0);
            r.halley_steps = 3;
            r.sigma = r.total_vol / root_t;
            return r;
        }
        const H3Step s0 = h3_step<ErfcxTier::Fast>(x, v0, lnc, cfg.seed_floor);
        const H3Step s1 = h3_step<ErfcxTier::Exact>(x, s0.v_next, lnc, cfg.seed_floor);
        const H3Step s2 = h3_step<ErfcxTier::Exact>(x, s1.v_next, lnc, cfg.seed_floor);
        r.fast_steps = 1;
        r.exact_steps = 2;
        double v = s2.v_next;
        r.residual = std::fabs(s2.f);
        if (std::fabs(s2.f) >= cfg.safety_threshold) {
            const H3Step s3 = h3_step<ErfcxTier::Exact>(x, v, lnc, cfg.seed_floor);
            v = s3.v_next;
            r.residual = std::fabs(s3.f);
            r.exact_steps = 3;
            r.safety_fired = true;
        }
        r.total_vol = v;
    }
    if (cfg.polish == Polish::On) {
        r.total_vol = polish_newton(q, r.total_vol);
        r.polished = true;
    }
    r.sigma = r.total_vol / root_t;
    return r;
}

SolverResult solve_normalized(double x, double c, double expiry, const SolverConfig& cfg) {
    cfg.validate();
    return solve_normalized(NormalizedQuote::make(x, c, expiry), cfg);
}

SolverResult solve(const OptionQuote& quote, const SolverConfig& cfg) {
    cfg.validate();
    return solve_normalized(normalize(quote), cfg);
}

}  // namespace flashiv
