#include "flashiv/bench.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cctype>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "flashiv/error.hpp"
#include "flashiv/math_kernels.hpp"
#include "flashiv/oracle.hpp"

namespace flashiv::bench {

std::string_view to_string(Variant v) noexcept {
    switch (v) {
        case Variant::FlashIV:
            return "flashiv";
        case Variant::FlashIVPlus:
            return "flashiv-plus";
        case Variant::Looped:
            return "looped";
    }
    return "unknown";
}

std::optional<Variant> parse_variant(std::string_view text) {
    std::string s;
    for (char ch : text) {
        s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
    if (s == "flashiv") {
        return Variant::FlashIV;
    }
    if (s == "flashiv-plus" || s == "flashiv+" || s == "plus") {
        return Variant::FlashIVPlus;
    }
    if (s == "looped" || s == "loop") {
        return Variant::Looped;
    }
    return std::nullopt;
}

std::vector<PreparedCase> prepare(const std::vector<BenchmarkCase>& cases) {
    std::vector<PreparedCase> out;
    out.reserve(cases.size());
    for (const BenchmarkCase& bc : cases) {
        out.push_back({NormalizedQuote::make(bc.x, bc.c_ref, bc.expiry), bc.v_ref});
    }
    return out;
}

SolverResult solve_looped(const NormalizedQuote& q) {
    const double x = q.x();
    const double c = q.c();
    const double lnc = q.lnc();
    SolverResult r;
    if (c <= kBachelierMaxPrice && std::fabs(x) <= kBachelierMaxAbsX) {
        r.branch = GuessBranch::BachelierLimit;
        r.total_vol = bachelier_limit_branch(q);
    } else {
        const Guess g = dispatch_guess(x, c, lnc);
        r.branch = g.branch;
        if (c >= kUpperGuard) {
            r.total_vol = upper_branch(q, g.v0);
            r.halley_steps = 3;
        } else {
            double v = h3_step<ErfcxTier::Fast>(x, g.v0, lnc).v_next;
            r.fast_steps = 1;
            for (int i = 0; i < kLoopedMaxSteps; ++i) {
                const DerivativeBundle b = derivative_bundle<ErfcxTier::Exact>(x, v, lnc);
                r.residual = std::fabs(b.f);
                if (r.residual < kLoopedTolerance) {
                    break;
                }
                bool fallback = false;
                v = h3_update(v, b, kSeedFloor, fallback);
                ++r.exact_steps;
            }
            r.total_vol = v;
        }
    }
    r.sigma = r.total_vol / std::sqrt(q.expiry());
    return r;
}

double solve_variant(const NormalizedQuote& q, Variant variant) {
    switch (variant) {
        case Variant::FlashIV:
            return solve_normalized(q).total_vol;
        case Variant::FlashIVPlus: {
            SolverConfig cfg;
            cfg.polish = Polish::On;
            return solve_normalized(q, cfg).total_vol;
        }
        case Variant::Looped:
            return solve_looped(q).total_vol;
    }
    return std::nan("");
}

double unpolished_ulp_budget(DatasetName name) noexcept {
    switch (name) {
        case DatasetName::CLY3D:
            return 1300.0;
        case DatasetName::CLY20:
            return 130.0;
        case DatasetName::CLY80:
            return 40.0;
        case DatasetName::Jaeckel:
            return 930.0;
        case DatasetName::Market:
            return 3040.0;
        case DatasetName::Corners:
            return 3290.0;
        case DatasetName::Stress:
            return 2080.0;
        case DatasetName::HighVol:
            return 70.0;
    }
    return 0.0;
}

Summary summarize(std::vector<double> values) {
    Summary s;
    if (values.empty()) {
        return s;
    }
    std::sort(values.begin(), values.end());
    const auto rank = [&](double p) {
        const auto k = static_cast<std::size_t>(std::ceil(p * static_cast<double>(values.size())));
        return values[std::clamp<std::size_t>(k, 1, values.size()) - 1];
    };
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    s.mean = sum / static_cast<double>(values.size());
    s.median = rank(0.5);
    s.p95 = rank(0.95);
    s.max = values.back();
    return s;
}

namespace {

void check_single_dataset(const std::vector<BenchmarkCase>& cases) {
    if (cases.empty()) {
        throw Error(ErrorCode::SchemaViolation, "dataset has no cases");
    }
    for (const BenchmarkCase& bc : cases) {
        if (bc.dataset != cases.front().dataset) {
            throw Error(ErrorCode::SchemaViolation, "cases from more than one dataset");
        }
    }
}

}  // namespace

BranchShares branch_shares(const std::vector<BenchmarkCase>& cases) {
    BranchShares shares{};
    if (cases.empty()) {
        return shares;
    }
    for (const BenchmarkCase& bc : cases) {
        const NormalizedQuote q = NormalizedQuote::make(bc.x, bc.c_ref, bc.expiry);
        shares[static_cast<std::size_t>(dispatch_guess(q).branch)] += 1.0;
    }
    for (double& s : shares) {
        s /= static_cast<double>(cases.size());
    }
    return shares;
}

std::vector<double> seed_errors(const std::vector<BenchmarkCase>& cases) {
    std::vector<double> out;
    out.reserve(cases.size());
    for (const BenchmarkCase& bc : cases) {
        const NormalizedQuote q = NormalizedQuote::make(bc.x, bc.c_ref, bc.expiry);
        const Guess g = dispatch_guess(q);
        if (g.branch == GuessBranch::BachelierLimit) {
            continue;
        }
        out.push_back(std::fabs(g.v0 - bc.v_ref) / bc.v_ref);
    }
    return out;
}

AccuracyReport evaluate_accuracy(const std::vector<BenchmarkCase>& cases, Variant variant) {
    check_single_dataset(cases);
    AccuracyReport rep;
    rep.dataset = cases.front().dataset;
    rep.variant = variant;
    rep.count = cases.size();
    std::vector<double> ulps;
    ulps.reserve(cases.size());
    SolverConfig cfg;
    if (variant == Variant::FlashIVPlus) {
        cfg.polish = Polish::On;
    }
    for (const BenchmarkCase& bc : cases) {
        const NormalizedQuote q = NormalizedQuote::make(bc.x, bc.c_ref, bc.expiry);
        const SolverResult r = variant == Variant::Looped ? solve_looped(q) : solve_normalized(q, cfg);
        const double abs_err = std::fabs(r.total_vol - bc.v_ref);
        ulps.push_back(ulp_error(r.total_vol, bc.v_ref));
        rep.max_abs_error = std::max(rep.max_abs_error, abs_err);
        rep.max_rel_error = std::max(rep.max_rel_error, abs_err / bc.v_ref);
        rep.branch_shares[static_cast<std::size_t>(r.branch)] += 1.0;
        if (r.fast_steps > 0) {
            ++rep.main_path;
            const bool fixed = r.fast_steps == 1 && (r.exact_steps == 2 || (r.exact_steps == 3 && r.safety_fired));
            if (variant != Variant::Looped && !fixed) {
                ++rep.fixed_count_violations;
            }
        }
        if (r.safety_fired) {
            ++rep.safety_fires;
            if (std::fabs(bc.x) <= 2.0) {
                ++rep.safety_fires_inner;
            }
        }
    }
    for (double& s : rep.branch_shares) {
        s /= static_cast<double>(rep.count);
    }
    const Summary s = summarize(std::move(ulps));
    rep.max_ulp = s.max;
    rep.mean_ulp = s.mean;
    rep.median_ulp = s.median;
    rep.p95_ulp = s.p95;
    rep.safety_rate = static_cast<double>(rep.safety_fires) / static_cast<double>(rep.count);
    return rep;
}

namespace {

using Clock = std::chrono::steady_clock;

// Sweeps of all timed bodies are interleaved so that each sees the same
// machine state. Returns, per body, the median over runs of the minimum
// over sweeps, divided by calls.
std::vector<double> time_interleaved(const std::vector<std::function<void()>>& bodies, std::size_t calls, int sweeps,
                                     int runs) {
    std::vector<std::vector<double>> per_run(bodies.size());
    for (int r = 0; r < runs; ++r) {
        std::vector<double> best(bodies.size(), INFINITY);
        for (const auto& body : bodies) {
            body();  // warm-up
        }
        for (int s = 0; s < sweeps; ++s) {
            for (std::size_t i = 0; i < bodies.size(); ++i) {
                const auto t0 = Clock::now();
                bodies[i]();
                const auto t1 = Clock::now();
                best[i] = std::min(best[i], std::chrono::duration<double, std::nano>(t1 - t0).count());
            }
        }
        for (std::size_t i = 0; i < bodies.size(); ++i) {
            per_run[i].push_back(best[i] / static_cast<double>(calls));
        }
    }
    std::vector<double> out;
    for (auto& v : per_run) {
        std::sort(v.begin(), v.end());
        out.push_back(v[v.size() / 2]);
    }
    return out;
}

void check_protocol(int sweeps, int runs) {
    if (sweeps < kMinSweeps || runs < kMinRuns) {
        throw Error(ErrorCode::DomainError, "latency protocol needs at least 500 sweeps and 3 runs");
    }
}

volatile double g_sink = 0.0;

template <class Solve>
std::function<void()> sweep_of(const std::vector<PreparedCase>& cases, Solve solve) {
    return [&cases, solve] {
        double acc = 0.0;
        for (const PreparedCase& pc : cases) {
            acc += solve(pc.quote);
        }
        g_sink = g_sink + acc;
    };
}

}  // namespace

std::vector<LatencyReport> measure_latency(const std::vector<PreparedCase>& cases, const std::vector<Variant>& variants,
                                           int sweeps, int runs) {
    check_protocol(sweeps, runs);
    std::vector<LatencyReport> reps;
    std::vector<std::function<void()>> bodies;
    for (Variant v : variants) {
        reps.push_back({v, 0.0, sweeps, runs, cases.size()});
        switch (v) {
            case Variant::FlashIV:
                bodies.push_back(sweep_of(cases, [](const NormalizedQuote& q) { return solve_normalized(q).sigma; }));
                break;
            case Variant::FlashIVPlus:
                bodies.push_back(sweep_of(cases, [](const NormalizedQuote& q) {
                    SolverConfig cfg;
                    cfg.polish = Polish::On;
                    return solve_normalized(q, cfg).sigma;
                }));
                break;
            case Variant::Looped:
                bodies.push_back(sweep_of(cases, [](const NormalizedQuote& q) { return solve_looped(q).sigma; }));
                break;
        }
    }
    if (cases.empty()) {
        return reps;
    }
    const std::vector<double> ns = time_interleaved(bodies, cases.size(), sweeps, runs);
    for (std::size_t i = 0; i < reps.size(); ++i) {
        reps[i].ns_per_call = ns[i];
    }
    return reps;
}

LatencyReport measure_latency(const std::vector<PreparedCase>& cases, Variant variant, int sweeps, int runs) {
    return measure_latency(cases, std::vector<Variant>{variant}, sweeps, runs).front();
}

ErfcxTiming measure_erfcx(int sweeps, int runs) {
    check_protocol(sweeps, runs);
    constexpr std::size_t kN = 4096;
    std::vector<double> z(kN);
    for (std::size_t i = 0; i < kN; ++i) {
        z[i] = -3.0 + 9.0 * static_cast<double>(i) / static_cast<double>(kN - 1);
    }
    const auto body = [&z](auto kernel) {
        return std::function<void()>([&z, kernel] {
            double acc = 0.0;
            for (double zi : z) {
                acc += kernel(zi);
            }
            g_sink = g_sink + acc;
        });
    };
    const std::vector<double> ns = time_interleaved(
        {body([](double v) { return erfcx_fast(v); }), body([](double v) { return erfcx_exact(v); })}, kN, sweeps,
        runs);
    return {ns[0], ns[1]};
}

StageTrace trace_stages(const NormalizedQuote& q) {
    const double x = q.x();
    const double c = q.c();
    if ((c <= kBachelierMaxPrice && std::fabs(x) <= kBachelierMaxAbsX) || c >= kUpperGuard) {
        throw Error(ErrorCode::DomainError, "quote does not take the H3 path");
    }
    const Guess g = dispatch_guess(q);
    StageTrace t{g.branch, g.v0, 0.0, 0.0, 0.0};
    t.fast = h3_step<ErfcxTier::Fast>(x, t.seed, q.lnc()).v_next;
    t.exact1 = h3_step<ErfcxTier::Exact>(x, t.fast, q.lnc()).v_next;
    t.exact2 = h3_step<ErfcxTier::Exact>(x, t.exact1, q.lnc()).v_next;
    return t;
}

std::vector<SliceRow> convergence_slices(const std::vector<double>& xs, double v_min, double v_max, int points) {
    if (!(v_min > 0.0 && v_max > v_min) || points < 2) {
        throw Error(ErrorCode::DomainError, "slice range needs 0 < v_min < v_max and at least 2 points");
    }
    std::vector<SliceRow> rows;
    const double ratio = std::log(v_max / v_min) / (points - 1);
    const auto rel = [](double v, double ref) { return std::max(std::fabs(v - ref) / ref, kSliceFloor); };
    for (double x : xs) {
        if (!(x <= 0.0)) {
            throw Error(ErrorCode::DomainError, "slice log-moneyness must be <= 0");
        }
        for (int i = 0; i < points; ++i) {
            const double v_ref = v_min * std::exp(ratio * i);
            const ReferenceCase rc = make_reference_case(x, v_ref);
            if (!(rc.c_ref >= std::numeric_limits<double>::min() && rc.c_ref < 1.0)) {
                continue;
            }
            const NormalizedQuote q = NormalizedQuote::make(x, rc.c_ref, 1.0);
            if ((rc.c_ref <= kBachelierMaxPrice && std::fabs(x) <= kBachelierMaxAbsX) || rc.c_ref >= kUpperGuard) {
                continue;
            }
            const StageTrace t = trace_stages(q);
            const LogPrice lp = log_price<ErfcxTier::Exact>(x, rc.v_ref);
            const double diff = lp.n_plus - lp.n_minus;
            const double cond = std::max(1.0, std::fabs(lp.lnc)) + (lp.n_plus + lp.n_minus) / diff;
            const double slope = detail::kSqrtTwoOverPi / diff;
            const double resolution = 4.0 * std::numeric_limits<double>::epsilon() * cond / (rc.v_ref * slope);
            rows.push_back({x, rc.v_ref, rc.c_ref, t.branch, rel(t.seed, rc.v_ref), rel(t.fast, rc.v_ref),
                            rel(t.exact1, rc.v_ref), rel(t.exact2, rc.v_ref), resolution});
        }
    }
    return rows;
}

}  // namespace flashiv::bench
