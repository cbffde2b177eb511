#include "flashiv/normalization.hpp"

#include <algorithm>
#include <cmath>

#include "flashiv/error.hpp"

namespace flashiv {

NormalizedQuote NormalizedQuote::make(double x, double c, double expiry) {
    if (!(std::isfinite(x) && x <= 0.0)) {
        throw Error(ErrorCode::DomainError, "log-moneyness must be finite and <= 0");
    }
    if (!(expiry > 0.0) || !std::isfinite(expiry)) {
        throw Error(ErrorCode::NonPositiveInput, "expiry must be positive");
    }
    if (!(c > 0.0)) {
        throw Error(ErrorCode::PriceBelowIntrinsic, "normalised price must be positive");
    }
    if (!(c < 1.0)) {
        throw Error(ErrorCode::PriceAtOrAboveUpperBound, "normalised price must be below 1");
    }
    return NormalizedQuote(x, std::exp(x), c, expiry);
}

NormalizedQuote normalize(const OptionQuote& quote) {
    const double f = quote.forward;
    const double k = quote.strike;
    if (!(f > 0.0) || !(k > 0.0) || !(quote.expiry > 0.0) || !std::isfinite(f) || !std::isfinite(k) ||
        !std::isfinite(quote.expiry)) {
        throw Error(ErrorCode::NonPositiveInput, "forward, strike and expiry must be positive");
    }
    if (!std::isfinite(quote.price)) {
        throw Error(ErrorCode::PriceAtOrAboveUpperBound, "price must be finite");
    }

    double otm = quote.price;
    if (quote.kind == OptionKind::Call && f > k) {
        otm = quote.price - (f - k);
    } else if (quote.kind == OptionKind::Put && f < k) {
        otm = quote.price - (k - f);
    }

    const double f_star = std::min(f, k);
    const double k_star = std::max(f, k);
    if (!(otm > 0.0)) {
        throw Error(ErrorCode::PriceBelowIntrinsic, "price is at or below intrinsic value");
    }
    const double c = otm / f_star;
    if (!(c < 1.0)) {
        throw Error(ErrorCode::PriceAtOrAboveUpperBound, "price is at or above the no-arbitrage upper bound");
    }
    const double ex = f_star / k_star;
    return NormalizedQuote(std::log(ex), ex, c, quote.expiry);
}

}  // namespace flashiv
