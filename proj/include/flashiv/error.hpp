#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace flashiv {

/// Stable error codes. The numeric values are part of the public interface
/// (they cross the Python boundary and appear in CLI diagnostics).
enum class ErrorCode : int {
    DomainError = 1,
    PriceBelowIntrinsic = 2,
    PriceAtOrAboveUpperBound = 3,
    NonPositiveInput = 4,
    DegenerateVolatility = 5,
    DomainViolation = 6,
    GuardViolation = 7,
    NonFiniteStep = 8,
    DegenerateResult = 9,
    BracketFailure = 10,
    SchemaViolation = 11,
    IoError = 12,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace flashiv
