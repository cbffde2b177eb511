#include "flashiv/error.hpp"

namespace flashiv {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::PriceBelowIntrinsic: return "PriceBelowIntrinsic";
        case ErrorCode::PriceAtOrAboveUpperBound: return "PriceAtOrAboveUpperBound";
        case ErrorCode::NonPositiveInput: return "NonPositiveInput";
        case ErrorCode::DegenerateVolatility: return "DegenerateVolatility";
        case ErrorCode::DomainViolation: return "DomainViolation";
        case ErrorCode::GuardViolation: return "GuardViolation";
        case ErrorCode::NonFiniteStep: return "NonFiniteStep";
        case ErrorCode::DegenerateResult: return "DegenerateResult";
        case ErrorCode::BracketFailure: return "BracketFailure";
        case ErrorCode::SchemaViolation: return "SchemaViolation";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace flashiv
