#include <gtest/gtest.h>

#include <cmath>

#include "flashiv/error.hpp"
#include "flashiv/normalization.hpp"

namespace flashiv {
namespace {

ErrorCode code_of(const OptionQuote& q) {
    try {
        normalize(q);
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an error";
    return ErrorCode::DomainError;
}

TEST(Normalize, AtTheMoneyCall) {
    const NormalizedQuote n = normalize({OptionQuote{OptionKind::Call, 100.0, 100.0, 3.9877611676744920, 1.0}});
    EXPECT_EQ(n.x(), 0.0);
    EXPECT_DOUBLE_EQ(n.c(), 0.039877611676744920);
    EXPECT_EQ(n.ex(), 1.0);
}

TEST(Normalize, InTheMoneyCallUsesParity) {
    const NormalizedQuote n = normalize({OptionKind::Call, 110.0, 100.0, 14.0, 1.0});
    EXPECT_DOUBLE_EQ(n.x(), std::log(100.0 / 110.0));
    EXPECT_DOUBLE_EQ(n.c(), 0.04);
}

TEST(Normalize, InTheMoneyPutUsesParity) {
    const NormalizedQuote n = normalize({OptionKind::Put, 90.0, 100.0, 12.0, 1.0});
    EXPECT_DOUBLE_EQ(n.x(), std::log(90.0 / 100.0));
    EXPECT_DOUBLE_EQ(n.c(), 2.0 / 90.0);
}

TEST(Normalize, OutOfTheMoneyPutSwapsForwardAndStrike) {
    const NormalizedQuote n = normalize({OptionKind::Put, 100.0, 80.0, 1.5, 0.25});
    EXPECT_DOUBLE_EQ(n.x(), std::log(80.0 / 100.0));
    EXPECT_DOUBLE_EQ(n.c(), 1.5 / 80.0);
    EXPECT_DOUBLE_EQ(n.ex(), 0.8);
}

TEST(Normalize, PutCallSymmetry) {
    // Swapping F and K with call <-> put and the parity-adjusted price gives the same OTM quote.
    const double f = 100.0;
    const double k = 120.0;
    const double call = 3.0;
    const NormalizedQuote a = normalize({OptionKind::Call, f, k, call, 1.0});
    const NormalizedQuote b = normalize({OptionKind::Put, k, f, call, 1.0});
    EXPECT_EQ(a.x(), b.x());
    EXPECT_EQ(a.c(), b.c());
    const NormalizedQuote c = normalize({OptionKind::Put, f, k, call + (k - f), 1.0});
    EXPECT_DOUBLE_EQ(a.x(), c.x());
    EXPECT_DOUBLE_EQ(a.c(), c.c());
}

TEST(Normalize, CachesLogPriceAndBeta) {
    const NormalizedQuote n = normalize({OptionKind::Call, 100.0, 130.0, 2.5, 2.0});
    EXPECT_EQ(n.lnc(), std::log(n.c()));
    const double beta = n.c() * std::exp(0.5 * n.x());
    EXPECT_LE(std::fabs(n.beta() - beta), std::nextafter(beta, 1.0) - beta);
    EXPECT_EQ(n.m(), -n.x());
    EXPECT_EQ(n.expiry(), 2.0);
}

TEST(Normalize, Errors) {
    EXPECT_EQ(code_of({OptionKind::Call, 110.0, 100.0, 10.0, 1.0}), ErrorCode::PriceBelowIntrinsic);
    EXPECT_EQ(code_of({OptionKind::Call, 100.0, 100.0, 0.0, 1.0}), ErrorCode::PriceBelowIntrinsic);
    EXPECT_EQ(code_of({OptionKind::Call, 100.0, 120.0, 100.0, 1.0}), ErrorCode::PriceAtOrAboveUpperBound);
    EXPECT_EQ(code_of({OptionKind::Put, 100.0, 80.0, 80.0, 1.0}), ErrorCode::PriceAtOrAboveUpperBound);
    EXPECT_EQ(code_of({OptionKind::Call, 0.0, 100.0, 1.0, 1.0}), ErrorCode::NonPositiveInput);
    EXPECT_EQ(code_of({OptionKind::Call, 100.0, -1.0, 1.0, 1.0}), ErrorCode::NonPositiveInput);
    EXPECT_EQ(code_of({OptionKind::Call, 100.0, 100.0, 1.0, 0.0}), ErrorCode::NonPositiveInput);
}

TEST(NormalizedQuoteMake, ValidatesInvariants) {
    EXPECT_NO_THROW(NormalizedQuote::make(-0.5, 0.1, 1.0));
    EXPECT_THROW(NormalizedQuote::make(0.1, 0.1, 1.0), Error);
    EXPECT_THROW(NormalizedQuote::make(-0.1, 0.0, 1.0), Error);
    EXPECT_THROW(NormalizedQuote::make(-0.1, 1.0, 1.0), Error);
    EXPECT_THROW(NormalizedQuote::make(-0.1, 0.5, 0.0), Error);
}

TEST(Denormalize, Examples) {
    EXPECT_EQ(denormalize(0.2, 4.0), 0.1);
    EXPECT_EQ(denormalize(0.0, 3.0), 0.0);
    EXPECT_EQ(denormalize(1.5, 0.25), 3.0);
}

}  // namespace
}  // namespace flashiv
