#pragma once

#include <cmath>

namespace flashiv {

enum class OptionKind { Call, Put };

/// An undiscounted European quote. Discounting is the caller's business.
struct OptionQuote {
    OptionKind kind = OptionKind::Call;
    double forward = 0.0;
    double strike = 0.0;
    double price = 0.0;
    double expiry = 0.0;
};

/// Inversion input in out-of-the-money coordinates: the quote is an OTM call
/// on (F*, K*) = (min(F, K), max(F, K)) with
///
///   x = ln(F* / K*) <= 0,   c = C_otm / F* in (0, 1),   ln c cached.
///
/// Instances only come out of `normalize` or `NormalizedQuote::make`, both of
/// which validate, so every live object satisfies the invariants above.
class NormalizedQuote {
public:
    /// Validating constructor for callers that already hold OTM coordinates.
    /// Throws Error(DomainError) if x > 0 or x is not finite,
    /// PriceBelowIntrinsic if c <= 0, PriceAtOrAboveUpperBound if c >= 1 and
    /// NonPositiveInput if T <= 0.
    static NormalizedQuote make(double x, double c, double expiry);

    [[nodiscard]] double x() const noexcept { return x_; }
    [[nodiscard]] double ex() const noexcept { return ex_; }
    [[nodiscard]] double c() const noexcept { return c_; }
    [[nodiscard]] double lnc() const noexcept { return lnc_; }
    [[nodiscard]] double expiry() const noexcept { return expiry_; }

    /// Square-root-forward normalised price c e^{x/2} = C_otm / sqrt(F* K*).
    [[nodiscard]] double beta() const noexcept { return c_ * std::exp(0.5 * x_); }
    /// Log-moneyness gap m = -x >= 0.
    [[nodiscard]] double m() const noexcept { return -x_; }

private:
    NormalizedQuote(double x, double ex, double c, double expiry)
        : x_(x), ex_(ex), c_(c), lnc_(std::log(c)), expiry_(expiry) {}

    friend NormalizedQuote normalize(const OptionQuote& quote);

    double x_;
    double ex_;
    double c_;
    double lnc_;
    double expiry_;
};

/// Reduce a call or put to the OTM representation via put-call parity,
/// exchanging forward and strike for OTM puts.
///
/// Throws Error with NonPositiveInput (F, K or T not strictly positive),
/// PriceBelowIntrinsic (no volatility reproduces a price at or under intrinsic;
/// the zero-volatility limit is reported here rather than as sigma = 0) or
/// PriceAtOrAboveUpperBound (c >= 1, volatility would be infinite).
NormalizedQuote normalize(const OptionQuote& quote);

/// sigma = v / sqrt(T).
inline double denormalize(double total_vol, double expiry) noexcept { return total_vol / std::sqrt(expiry); }

}  // namespace flashiv
