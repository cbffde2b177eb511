#include "flashiv/seeds.hpp"

#include <fstream>
#include <istream>
#include <sstream>
#include <string>

#include "flashiv/error.hpp"

namespace flashiv {

std::string_view to_string(GuessBranch branch) noexcept {
    switch (branch) {
        case GuessBranch::BachelierLimit: return "bachelier";
        case GuessBranch::LiRational: return "li";
        case GuessBranch::NearAtmSmallPrice: return "near_atm";
        case GuessBranch::UpperPrice: return "upper";
        case GuessBranch::AsymptoticOtm: return "asym";
        case GuessBranch::Fallback: return "fallback";
    }
    return "unknown";
}

LiCoefficients LiCoefficients::parse(std::istream& in) {
    LiCoefficients k;
    std::size_t count = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream fields(line);
        std::string token;
        while (fields >> token) {
            if (count >= 20) {
                throw Error(ErrorCode::SchemaViolation, "more than 20 Li coefficients");
            }
            std::size_t used = 0;
            double value = 0.0;
            try {
                value = std::stod(token, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != token.size() || !std::isfinite(value)) {
                throw Error(ErrorCode::SchemaViolation, "bad Li coefficient '" + token + "'");
            }
            (count < 10 ? k.m[count] : k.n[count - 10]) = value;
            ++count;
        }
    }
    if (count != 20) {
        throw Error(ErrorCode::SchemaViolation, "expected 20 Li coefficients, got " + std::to_string(count));
    }
    return k;
}

LiCoefficients LiCoefficients::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open " + path.string());
    }
    return parse(in);
}

double li_guess(double x, double c, const LiCoefficients& coeffs) {
    if (!in_li_domain(x, c)) {
        throw Error(ErrorCode::DomainViolation, "(x, c) outside the rational seed domain");
    }
    return li_rational(x, c, coeffs);
}

double asym_otm_guess(double x, double lnc) {
    if (!(lnc < kAsymMaxLnPrice)) {
        throw Error(ErrorCode::GuardViolation, "asymptotic seed requires ln c < -2");
    }
    if (!(x <= 0.0)) {
        throw Error(ErrorCode::DomainError, "log-moneyness must be <= 0");
    }
    return asym_otm_seed(x, lnc);
}

}  // namespace flashiv
