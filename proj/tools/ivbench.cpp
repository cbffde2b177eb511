// ivbench: dataset generation and evaluation harness for the flashiv solver.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "flashiv/bench.hpp"
#include "flashiv/datasets.hpp"
#include "flashiv/error.hpp"

namespace fs = std::filesystem;
using namespace flashiv;
using namespace flashiv::bench;

namespace {

struct NamedCases {
    std::string label;
    std::vector<BenchmarkCase> cases;
};

// Each argument is a CSV path, a dataset name, or "all".
std::vector<NamedCases> load_inputs(const std::vector<std::string>& args) {
    std::vector<NamedCases> out;
    for (const std::string& arg : args) {
        if (arg == "all") {
            for (DatasetName n : kAllDatasets) {
                out.push_back({std::string(to_string(n)), build_dataset(n)});
            }
            continue;
        }
        if (fs::is_regular_file(arg)) {
            std::ifstream in(arg);
            auto cases = read_csv(in);
            const std::string label = cases.empty() ? arg : std::string(to_string(cases.front().dataset));
            out.push_back({label, std::move(cases)});
            continue;
        }
        const auto name = parse_dataset_name(arg);
        if (!name) {
            throw Error(ErrorCode::SchemaViolation, "not a dataset file or name: " + arg);
        }
        out.push_back({std::string(to_string(*name)), build_dataset(*name)});
    }
    return out;
}

class Checks {
public:
    void check(bool ok, const std::string& label, const std::string& detail) {
        std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", label.c_str(), detail.c_str());
        (ok ? passed_ : failed_) += 1;
    }
    int finish() const {
        std::printf("assert: %d passed, %d failed\n", passed_, failed_);
        return failed_ == 0 ? 0 : 1;
    }

private:
    int passed_ = 0;
    int failed_ = 0;
};

std::string fmt(const char* f, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot write " + path);
    }
    return out;
}

double share(const BranchShares& s, GuessBranch b) { return s[static_cast<std::size_t>(b)]; }

constexpr GuessBranch kBranches[] = {GuessBranch::BachelierLimit, GuessBranch::LiRational,
                                     GuessBranch::NearAtmSmallPrice, GuessBranch::UpperPrice,
                                     GuessBranch::AsymptoticOtm,      GuessBranch::Fallback};

int cmd_gen(const std::vector<std::string>& names, const std::string& out_dir) {
    fs::create_directories(out_dir);
    std::vector<DatasetName> which;
    for (const std::string& n : names) {
        if (n == "all") {
            which.assign(kAllDatasets.begin(), kAllDatasets.end());
            continue;
        }
        const auto name = parse_dataset_name(n);
        if (!name) {
            throw Error(ErrorCode::SchemaViolation, "unknown dataset: " + n);
        }
        which.push_back(*name);
    }
    for (DatasetName n : which) {
        const auto cases = build_dataset(n);
        const fs::path path = fs::path(out_dir) / (std::string(to_string(n)) + ".csv");
        auto out = open_out(path.string());
        write_csv(out, cases);
        std::printf("%-8s %6zu cases -> %s\n", std::string(to_string(n)).c_str(), cases.size(), path.c_str());
    }
    return 0;
}

int cmd_accuracy(const std::vector<std::string>& inputs, const std::string& variant_text, const std::string& csv,
                 bool assert_mode) {
    const auto variant = parse_variant(variant_text);
    if (!variant) {
        throw Error(ErrorCode::SchemaViolation, "unknown variant: " + variant_text);
    }
    std::vector<AccuracyReport> reports;
    std::printf("%-8s %-12s %6s %9s %9s %9s %9s %10s %10s %6s %6s %6s %8s\n", "dataset", "variant", "cases", "max_ulp",
                "mean_ulp", "med_ulp", "p95_ulp", "max_abs", "max_rel", "li%", "asym%", "fb%", "safety%");
    for (const NamedCases& nc : load_inputs(inputs)) {
        const AccuracyReport r = evaluate_accuracy(nc.cases, *variant);
        std::printf("%-8s %-12s %6zu %9.1f %9.3f %9.1f %9.1f %10.2e %10.2e %6.1f %6.1f %6.1f %8.4f\n",
                    nc.label.c_str(), std::string(to_string(r.variant)).c_str(), r.count, r.max_ulp, r.mean_ulp,
                    r.median_ulp, r.p95_ulp, r.max_abs_error, r.max_rel_error,
                    100 * share(r.branch_shares, GuessBranch::LiRational),
                    100 * share(r.branch_shares, GuessBranch::AsymptoticOtm),
                    100 * share(r.branch_shares, GuessBranch::Fallback), 100 * r.safety_rate);
        reports.push_back(r);
    }
    if (!csv.empty()) {
        auto out = open_out(csv);
        out << "dataset,variant,count,max_ulp,mean_ulp,median_ulp,p95_ulp,max_abs_error,max_rel_error";
        for (GuessBranch b : kBranches) {
            out << ",share_" << to_string(b);
        }
        out << ",safety_fires,safety_fires_inner,safety_rate\n";
        out.precision(17);
        for (const AccuracyReport& r : reports) {
            out << to_string(r.dataset) << ',' << to_string(r.variant) << ',' << r.count << ',' << r.max_ulp << ','
                << r.mean_ulp << ',' << r.median_ulp << ',' << r.p95_ulp << ',' << r.max_abs_error << ','
                << r.max_rel_error;
            for (GuessBranch b : kBranches) {
                out << ',' << share(r.branch_shares, b);
            }
            out << ',' << r.safety_fires << ',' << r.safety_fires_inner << ',' << r.safety_rate << '\n';
        }
    }
    if (!assert_mode) {
        return 0;
    }
    Checks checks;
    for (const AccuracyReport& r : reports) {
        const std::string ds(to_string(r.dataset));
        if (r.variant == Variant::FlashIV) {
            const double budget = unpolished_ulp_budget(r.dataset);
            checks.check(r.max_ulp <= budget, ds + " max ulp", fmt("%.0f <= %.0f", r.max_ulp, budget));
            checks.check(r.max_rel_error <= 5e-11, ds + " max relative error",
                         fmt("%.3g <= %.3g", r.max_rel_error, 5e-11));
            checks.check(r.fixed_count_violations == 0, ds + " fixed step count",
                         fmt("%.0f violations", static_cast<double>(r.fixed_count_violations)));
            if (r.dataset == DatasetName::CLY3D) {
                checks.check(r.safety_rate < 1e-3, ds + " safety rate", fmt("%.4g < %.4g", r.safety_rate, 1e-3));
                checks.check(r.safety_fires_inner == 0, ds + " safety fires only for |x| > 2",
                             fmt("%.0f of %.0f fires at |x| <= 2", static_cast<double>(r.safety_fires_inner),
                                 static_cast<double>(r.safety_fires)));
            }
        } else if (r.variant == Variant::FlashIVPlus) {
            checks.check(r.max_rel_error <= 1e-13, ds + " max relative error",
                         fmt("%.3g <= %.3g", r.max_rel_error, 1e-13));
            if (r.dataset == DatasetName::CLY20) {
                checks.check(r.max_ulp <= 50, ds + " max ulp", fmt("%.0f <= %.0f", r.max_ulp, 50));
            }
            if (r.dataset == DatasetName::CLY3D) {
                checks.check(r.max_abs_error <= 7e-15, ds + " max absolute error",
                             fmt("%.3g <= %.3g", r.max_abs_error, 7e-15));
            }
        } else {
            checks.check(r.max_rel_error <= 5e-11, ds + " max relative error",
                         fmt("%.3g <= %.3g", r.max_rel_error, 5e-11));
        }
    }
    return checks.finish();
}

int cmd_latency(const std::vector<std::string>& inputs, const std::vector<std::string>& variant_texts, int sweeps,
                int runs, const std::string& csv, bool assert_mode) {
    std::vector<Variant> variants;
    for (const std::string& t : variant_texts) {
        const auto v = parse_variant(t);
        if (!v) {
            throw Error(ErrorCode::SchemaViolation, "unknown variant: " + t);
        }
        variants.push_back(*v);
    }
    struct Row {
        std::string dataset;
        LatencyReport rep;
    };
    std::vector<Row> rows;
    std::printf("%-8s %-12s %10s %7s %5s %7s\n", "dataset", "variant", "ns/call", "sweeps", "runs", "cases");
    for (const NamedCases& nc : load_inputs(inputs)) {
        const auto prepared = prepare(nc.cases);
        for (const LatencyReport& r : measure_latency(prepared, variants, sweeps, runs)) {
            std::printf("%-8s %-12s %10.1f %7d %5d %7zu\n", nc.label.c_str(),
                        std::string(to_string(r.variant)).c_str(), r.ns_per_call, r.sweeps, r.runs, r.cases);
            rows.push_back({nc.label, r});
        }
    }
    const ErfcxTiming et = measure_erfcx(sweeps, runs);
    std::printf("erfcx    fast %.2f ns, exact %.2f ns, ratio %.2f\n", et.fast_ns, et.exact_ns, et.exact_ns / et.fast_ns);
    if (!csv.empty()) {
        auto out = open_out(csv);
        out << "dataset,variant,ns_per_call,sweeps,runs,cases\n";
        for (const Row& row : rows) {
            out << row.dataset << ',' << to_string(row.rep.variant) << ',' << row.rep.ns_per_call << ','
                << row.rep.sweeps << ',' << row.rep.runs << ',' << row.rep.cases << '\n';
        }
        out << "kernel,erfcx_fast," << et.fast_ns << ',' << sweeps << ',' << runs << ",4096\n";
        out << "kernel,erfcx_exact," << et.exact_ns << ',' << sweeps << ',' << runs << ",4096\n";
    }
    if (!assert_mode) {
        return 0;
    }
    Checks checks;
    for (const Row& a : rows) {
        if (a.rep.variant != Variant::FlashIV) {
            continue;
        }
        for (const Row& b : rows) {
            if (b.dataset == a.dataset && b.rep.variant == Variant::Looped) {
                const double gain = 1.0 - a.rep.ns_per_call / b.rep.ns_per_call;
                checks.check(gain >= 0.10, a.dataset + " fixed-count vs looped",
                             fmt("%.1f%% faster (%.0f%% required)", 100 * gain, 10));
            }
        }
    }
    checks.check(et.exact_ns >= 1.5 * et.fast_ns, "erfcx fast vs exact",
                 fmt("%.2fx (%.1fx required)", et.exact_ns / et.fast_ns, 1.5));
    return checks.finish();
}

int cmd_branches(const std::vector<std::string>& inputs, const std::string& csv, bool assert_mode) {
    std::vector<std::pair<std::string, BranchShares>> rows;
    std::printf("%-8s %7s", "dataset", "cases");
    for (GuessBranch b : kBranches) {
        std::printf(" %9s", std::string(to_string(b)).c_str());
    }
    std::printf("\n");
    std::vector<std::pair<DatasetName, BranchShares>> named;
    for (const NamedCases& nc : load_inputs(inputs)) {
        const BranchShares s = branch_shares(nc.cases);
        std::printf("%-8s %7zu", nc.label.c_str(), nc.cases.size());
        for (GuessBranch b : kBranches) {
            std::printf(" %9.2f", 100 * share(s, b));
        }
        std::printf("\n");
        rows.emplace_back(nc.label, s);
        if (!nc.cases.empty()) {
            named.emplace_back(nc.cases.front().dataset, s);
        }
    }
    if (!csv.empty()) {
        auto out = open_out(csv);
        out << "dataset";
        for (GuessBranch b : kBranches) {
            out << ',' << to_string(b);
        }
        out << '\n';
        out.precision(17);
        for (const auto& [label, s] : rows) {
            out << label;
            for (GuessBranch b : kBranches) {
                out << ',' << share(s, b);
            }
            out << '\n';
        }
    }
    if (!assert_mode) {
        return 0;
    }
    Checks checks;
    for (const auto& [name, s] : named) {
        const double li = 100 * share(s, GuessBranch::LiRational);
        const double asym = 100 * share(s, GuessBranch::AsymptoticOtm);
        const double fb = 100 * share(s, GuessBranch::Fallback);
        if (name == DatasetName::CLY3D) {
            checks.check(std::fabs(li - 58.5) <= 5.0, "CLY3D li share", fmt("%.2f%% vs 58.5 +- %.0f", li, 5));
            checks.check(std::fabs(asym - 41.5) <= 5.0, "CLY3D asym share", fmt("%.2f%% vs 41.5 +- %.0f", asym, 5));
            checks.check(fb == 0.0, "CLY3D fallback share", fmt("%.2f%%", fb));
        } else if (name == DatasetName::HighVol) {
            checks.check(std::fabs(fb - 50.3) <= 10.0, "HighVol fallback share",
                         fmt("%.2f%% vs 50.3 +- %.0f", fb, 10));
        } else if (name == DatasetName::Corners) {
            bool dominant = true;
            for (GuessBranch b : kBranches) {
                dominant = dominant && share(s, GuessBranch::AsymptoticOtm) >= share(s, b);
            }
            checks.check(dominant, "Corners asym dominant", fmt("%.2f%%", asym));
        }
    }
    return checks.finish();
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(std::stod(item));
    }
    return out;
}

// Slices whose final error may sit at the pricing-formula limit rather than the iteration limit.
bool near_atm_low_vol(const SliceRow& r) { return std::fabs(r.x) < 0.01 && r.v_ref < 0.05; }

int cmd_slices(const std::string& xs_text, double v_min, double v_max, int points, const std::string& csv,
               bool assert_mode) {
    const auto rows = convergence_slices(parse_list(xs_text), v_min, v_max, points);
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!csv.empty()) {
        file = open_out(csv);
        os = &file;
    }
    *os << "x,v_ref,c_ref,branch,seed_err,fast_err,exact1_err,exact2_err,resolution\n";
    os->precision(17);
    for (const SliceRow& r : rows) {
        *os << r.x << ',' << r.v_ref << ',' << r.c_ref << ',' << to_string(r.branch) << ',' << r.seed_err << ','
            << r.fast_err << ',' << r.exact1_err << ',' << r.exact2_err << ',' << r.resolution << '\n';
    }
    if (!csv.empty()) {
        std::printf("%zu slice points -> %s\n", rows.size(), csv.c_str());
    }
    if (!assert_mode) {
        return 0;
    }
    Checks checks;
    std::size_t monotone = 0;
    std::size_t final_ok = 0;
    std::size_t final_total = 0;
    bool floored = true;
    for (const SliceRow& r : rows) {
        // Differences below the objective's resolution are rounding noise.
        if (r.exact1_err <= std::max(r.fast_err, r.resolution) &&
            r.exact2_err <= std::max(r.exact1_err, r.resolution)) {
            ++monotone;
        }
        if (!near_atm_low_vol(r)) {
            ++final_total;
            final_ok += r.exact2_err <= 1e-13 ? 1 : 0;
        }
        floored = floored && r.seed_err >= kSliceFloor && r.fast_err >= kSliceFloor && r.exact1_err >= kSliceFloor &&
                  r.exact2_err >= kSliceFloor;
    }
    const double n = static_cast<double>(rows.size());
    checks.check(!rows.empty() && monotone >= 0.99 * n, "non-increasing after fast step",
                 fmt("%.2f%% of %.0f points", 100.0 * static_cast<double>(monotone) / n, n));
    checks.check(final_ok == final_total, "final error <= 1e-13 outside the near-ATM low-vol corner",
                 fmt("%.0f of %.0f", static_cast<double>(final_ok), static_cast<double>(final_total)));
    checks.check(floored, "errors floored at 1e-18", floored ? "yes" : "no");
    return checks.finish();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Implied-volatility benchmark harness"};
    app.require_subcommand(1);

    std::vector<std::string> datasets{"all"};
    std::string out_dir = "datasets";
    auto* gen = app.add_subcommand("gen", "Write benchmark datasets as CSV");
    gen->add_option("--dataset", datasets, "Dataset names or 'all'");
    gen->add_option("--out", out_dir, "Output directory");

    std::string variant = "flashiv";
    std::string csv;
    bool assert_mode = false;
    auto* acc = app.add_subcommand("accuracy", "Round-trip accuracy against reference volatilities");
    acc->add_option("--dataset", datasets, "CSV files, dataset names or 'all'");
    acc->add_option("--variant", variant, "flashiv | flashiv-plus | looped");
    acc->add_option("--csv,--out", csv, "Write the report as CSV");
    acc->add_flag("--assert", assert_mode, "Check acceptance thresholds; exit 1 on failure");

    std::vector<std::string> lat_datasets{"CLY3D"};
    std::vector<std::string> lat_variants{"flashiv", "looped"};
    int sweeps = kMinSweeps;
    int runs = kMinRuns;
    auto* lat = app.add_subcommand("latency", "ns/call per dataset and variant");
    lat->add_option("--dataset", lat_datasets, "CSV files, dataset names or 'all'");
    lat->add_option("--variant", lat_variants, "Variants to time");
    lat->add_option("--sweeps", sweeps, "Sweeps per run (>= 500)");
    lat->add_option("--runs", runs, "Independent runs (>= 3)");
    lat->add_option("--csv,--out", csv, "Write the report as CSV");
    lat->add_flag("--assert", assert_mode, "Check relative-latency thresholds; exit 1 on failure");

    auto* br = app.add_subcommand("branches", "Guess-domain distribution");
    br->add_option("--dataset", datasets, "CSV files, dataset names or 'all'");
    br->add_option("--csv,--out", csv, "Write the table as CSV");
    br->add_flag("--assert", assert_mode, "Check share thresholds; exit 1 on failure");

    std::string xs = "-0.01,-0.1,-0.5,-1,-2,-4";
    double v_min = 0.01;
    double v_max = 4.0;
    int points = 200;
    auto* sl = app.add_subcommand("slices", "Per-stage errors on fixed-x slices");
    sl->add_option("--x", xs, "Comma-separated log-moneyness values (<= 0)");
    sl->add_option("--vmin", v_min, "Smallest reference total volatility");
    sl->add_option("--vmax", v_max, "Largest reference total volatility");
    sl->add_option("--points", points, "Points per slice, log-spaced");
    sl->add_option("--csv,--out", csv, "Write the slices as CSV instead of stdout");
    sl->add_flag("--assert", assert_mode, "Check slice properties; exit 1 on failure");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            return cmd_gen(datasets, out_dir);
        }
        if (*acc) {
            return cmd_accuracy(datasets, variant, csv, assert_mode);
        }
        if (*lat) {
            return cmd_latency(lat_datasets, lat_variants, sweeps, runs, csv, assert_mode);
        }
        if (*br) {
            return cmd_branches(datasets, csv, assert_mode);
        }
        if (*sl) {
            return cmd_slices(xs, v_min, v_max, points, csv, assert_mode);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "ivbench: %s\n", e.what());
        return 2;
    }
    return 0;
}
