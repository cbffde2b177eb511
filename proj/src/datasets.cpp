#include "flashiv/datasets.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>
#include <utility>

#include "flashiv/error.hpp"
#include "flashiv/oracle.hpp"

namespace flashiv {

namespace {

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) {
        out[i] = a + (b - a) * i / (n - 1);
    }
    out.back() = b;
    return out;
}

std::vector<double> geomspace(double a, double b, int n) {
    std::vector<double> out(n);
    const double la = std::log(a);
    const double lb = std::log(b);
    for (int i = 0; i < n; ++i) {
        out[i] = std::exp(la + (lb - la) * i / (n - 1));
    }
    out.front() = a;
    out.back() = b;
    return out;
}

double log_moneyness(double forward, double strike) {
    return std::log(std::min(forward, strike) / std::max(forward, strike));
}

struct Builder {
    const DatasetSpec& spec;
    std::vector<BenchmarkCase> cases;

    void add(double x, double expiry, double v) {
        const double c = black_price_hi(x, v).to_double();
        if (c >= spec.price_floor && c > spec.price_min && c < spec.price_max) {
            cases.push_back({spec.name, x, expiry, v, c});
        }
    }

    // Strike ratios K/F against F = 1, every (K/F, T, sigma) combination.
    void lattice(const std::vector<double>& ratios, const std::vector<double>& expiries,
                 const std::vector<double>& vols) {
        for (double k : ratios) {
            const double x = log_moneyness(1.0, k);
            for (double t : expiries) {
                for (double s : vols) {
                    add(x, t, s * std::sqrt(t));
                }
            }
        }
    }
};

void build_cly3d(Builder& b) {
    // F = 100, 40 x 37 x 37 linear lattice.
    std::vector<double> ratios;
    for (double k : linspace(105.0, 800.0, 40)) {
        ratios.push_back(k / 100.0);
    }
    b.lattice(ratios, linspace(0.01, 2.0, 37), linspace(0.01, 0.99, 37));
}

void build_cly_surface(Builder& b, double kmax, double sigma) {
    std::vector<double> ratios;
    for (double k : linspace(105.0, kmax, 40)) {
        ratios.push_back(k / 100.0);
    }
    b.lattice(ratios, linspace(0.1, 2.0, 40), {sigma});
}

void build_market(Builder& b) {
    // Expiries uniform in sqrt(T) between one trading day and five years.
    std::vector<double> expiries;
    for (double r : linspace(std::sqrt(1.0 / 252.0), std::sqrt(5.0), 29)) {
        expiries.push_back(r * r);
    }
    b.lattice(linspace(0.7, 1.5, 41), expiries, {0.1, 0.2, 0.3, 0.4, 0.6, 0.8});
}

void build_corners(Builder& b) {
    // Low volatility, short maturity.
    b.lattice({0.5, 0.7, 0.8, 0.9, 0.95, 0.98, 1.02, 1.05, 1.1, 1.25, 1.5, 2.0}, {1.0 / 365.0, 7.0 / 365.0, 1.0 / 12.0},
              {0.01, 0.02, 0.05, 0.1});
    // High volatility, deep out of the money.
    b.lattice({25.0, 50.0, 100.0, 200.0, 500.0}, {0.1, 0.25, 0.5, 1.0, 2.0}, {0.5, 1.0, 1.5, 2.0, 3.0});
    // Near the money with small prices, T = 1 so v = sigma.
    for (double m : {0.0, 1e-6, 1e-5, 1e-4, 5e-4, 1e-3}) {
        for (double v : geomspace(5e-4, 5e-3, 8)) {
            b.add(0.0 - m, 1.0, v);
        }
    }
    // Prices close to the upper bound.
    for (double m : {0.0, 0.01, 0.1, 0.3, 0.5, 1.0}) {
        for (double v : linspace(4.5, 7.0, 6)) {
            b.add(0.0 - m, 1.0, v);
        }
    }
}

void build_highvol(Builder& b) {
    // Lattice in (x, c): per x, six prices log-spaced strictly inside
    // (0.05, e^-2) and six inside (e^-2, 0.95), inverted with the oracle.
    // T = 8 keeps sigma = v / sqrt(T) below 2.5.
    constexpr double kExpiry = 8.0;
    const double split = std::exp(-2.0);
    std::vector<double> prices;
    for (auto [lo, hi] : {std::pair{0.05, split}, std::pair{split, 0.95}}) {
        const auto grid = geomspace(lo, hi, 8);
        prices.insert(prices.end(), grid.begin() + 1, grid.end() - 1);
    }
    for (double x : linspace(-6.0, -3.0, 13)) {
        for (double c : prices) {
            b.add(x, kExpiry, iv_reference(x, c));
        }
    }
}

}  // namespace

std::string_view to_string(DatasetName name) noexcept {
    switch (name) {
        case DatasetName::CLY3D: return "CLY3D";
        case DatasetName::CLY20: return "CLY20";
        case DatasetName::CLY80: return "CLY80";
        case DatasetName::Jaeckel: return "Jaeckel";
        case DatasetName::Market: return "Market";
        case DatasetName::Corners: return "Corners";
        case DatasetName::Stress: return "Stress";
        case DatasetName::HighVol: return "HighVol";
    }
    return "unknown";
}

std::optional<DatasetName> parse_dataset_name(std::string_view text) {
    std::string key;
    for (char ch : text) {
        if (ch != '-' && ch != '_') {
            key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
        }
    }
    for (DatasetName name : kAllDatasets) {
        std::string candidate;
        for (char ch : to_string(name)) {
            candidate.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
        }
        if (candidate == key) {
            return name;
        }
    }
    return std::nullopt;
}

DatasetSpec dataset_spec(DatasetName name) {
    DatasetSpec s{name, 1e-300, 0.0, 1.0, 0};
    switch (name) {
        case DatasetName::CLY3D: s.price_floor = 1e-20; s.nominal_count = 51321; break;
        case DatasetName::CLY20: s.nominal_count = 1600; break;
        case DatasetName::CLY80: s.nominal_count = 1600; break;
        case DatasetName::Jaeckel: s.nominal_count = 5182; break;
        case DatasetName::Market: s.nominal_count = 7151; break;
        case DatasetName::Corners: s.nominal_count = 278; break;
        case DatasetName::Stress: s.nominal_count = 1270; break;
        case DatasetName::HighVol:
            s.price_min = 0.05;
            s.price_max = 0.95;
            s.nominal_count = 149;
            break;
    }
    return s;
}

std::vector<BenchmarkCase> build_dataset(const DatasetSpec& spec) {
    Builder b{spec, {}};
    switch (spec.name) {
        case DatasetName::CLY3D: build_cly3d(b); break;
        case DatasetName::CLY20: build_cly_surface(b, 180.0, 0.2); break;
        case DatasetName::CLY80: build_cly_surface(b, 800.0, 0.8); break;
        case DatasetName::Jaeckel:
            b.lattice(geomspace(0.5, 8.0, 41), {0.02, 0.1, 0.5, 2.0}, linspace(0.05, 4.0, 32));
            break;
        case DatasetName::Market: build_market(b); break;
        case DatasetName::Corners: build_corners(b); break;
        case DatasetName::Stress:
            b.lattice(geomspace(0.01, 100.0, 33), geomspace(0.001, 10.0, 13), {0.2, 0.5, 1.0, 1.5});
            break;
        case DatasetName::HighVol: build_highvol(b); break;
    }
    std::stable_sort(b.cases.begin(), b.cases.end(), [](const BenchmarkCase& l, const BenchmarkCase& r) {
        return l.x < r.x || (l.x == r.x && l.v_ref < r.v_ref);
    });
    return std::move(b.cases);
}

namespace {

void put_double(std::ostream& out, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.write(buf, res.ptr - buf);
}

double parse_double(std::string_view field, std::size_t line) {
    double v = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size() || !std::isfinite(v)) {
        throw Error(ErrorCode::SchemaViolation,
                    "line " + std::to_string(line) + ": bad number '" + std::string(field) + "'");
    }
    return v;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<BenchmarkCase>& cases) {
    out << kCsvHeader << '\n';
    for (const BenchmarkCase& c : cases) {
        out << to_string(c.dataset) << ',';
        put_double(out, c.x);
        out << ',';
        put_double(out, c.expiry);
        out << ',';
        put_double(out, c.v_ref);
        out << ',';
        put_double(out, c.c_ref);
        out << '\n';
    }
}

std::vector<BenchmarkCase> read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw Error(ErrorCode::SchemaViolation, "empty dataset file");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != kCsvHeader) {
        throw Error(ErrorCode::SchemaViolation, "expected header '" + std::string(kCsvHeader) + "'");
    }
    std::vector<BenchmarkCase> cases;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        std::array<std::string_view, 5> f;
        std::string_view rest(line);
        for (std::size_t i = 0; i < 5; ++i) {
            const auto comma = rest.find(',');
            if ((comma == std::string_view::npos) != (i == 4)) {
                throw Error(ErrorCode::SchemaViolation, "line " + std::to_string(lineno) + ": expected 5 fields");
            }
            f[i] = rest.substr(0, comma);
            rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        }
        const auto name = parse_dataset_name(f[0]);
        if (!name) {
            throw Error(ErrorCode::SchemaViolation,
                        "line " + std::to_string(lineno) + ": unknown dataset '" + std::string(f[0]) + "'");
        }
        BenchmarkCase c{*name, parse_double(f[1], lineno), parse_double(f[2], lineno), parse_double(f[3], lineno),
                        parse_double(f[4], lineno)};
        if (!(c.x <= 0.0) || !(c.expiry > 0.0) || !(c.v_ref > 0.0) || !(c.c_ref > 0.0 && c.c_ref < 1.0)) {
            throw Error(ErrorCode::SchemaViolation, "line " + std::to_string(lineno) + ": value out of range");
        }
        cases.push_back(c);
    }
    return cases;
}

}  // namespace flashiv
