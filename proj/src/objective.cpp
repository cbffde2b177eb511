#include "flashiv/objective.hpp"

#include <cmath>

#include "flashiv/error.hpp"

namespace flashiv {

namespace {

void check_arguments(double x, double v) {
    if (!(x <= 0.0) || !std::isfinite(x)) {
        throw Error(ErrorCode::DomainError, "log-moneyness must be finite and <= 0");
    }
    if (!(v >= kMinObjectiveVolatility) || !std::isfinite(v)) {
        throw Error(ErrorCode::DegenerateVolatility, "total volatility below the objective floor");
    }
}

}  // namespace

LogPrice log_price(double x, double v, ErfcxTier tier) {
    check_arguments(x, v);
    return tier == ErfcxTier::Fast ? log_price<ErfcxTier::Fast>(x, v) : log_price<ErfcxTier::Exact>(x, v);
}

DerivativeBundle derivative_bundle(double x, double v, double lnc_target, ErfcxTier tier) {
    check_arguments(x, v);
    return tier == ErfcxTier::Fast ? derivative_bundle<ErfcxTier::Fast>(x, v, lnc_target)
                                   : derivative_bundle<ErfcxTier::Exact>(x, v, lnc_target);
}

}  // namespace flashiv
