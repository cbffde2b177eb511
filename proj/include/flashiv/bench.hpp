#pragma once

// Evaluation harness: accuracy, guess-domain statistics, latency and
// convergence slices over benchmark datasets.

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "flashiv/datasets.hpp"
#include "flashiv/seeds.hpp"
#include "flashiv/solver.hpp"

namespace flashiv::bench {

/// flashiv: fixed-count path. flashiv-plus: fixed-count path plus the final
/// Newton polish. looped: same seeds and steps, but exact H3 steps repeat
/// until |f| < 1e-14 (at most kLoopedMaxSteps).
enum class Variant { FlashIV, FlashIVPlus, Looped };

inline constexpr int kLoopedMaxSteps = 8;
inline constexpr double kLoopedTolerance = 1e-14;

std::string_view to_string(Variant v) noexcept;
std::optional<Variant> parse_variant(std::string_view text);

/// Hot-path input, precomputed once per case so that sweeps time only the solve.
struct PreparedCase {
    NormalizedQuote quote;
    double v_ref;
};

std::vector<PreparedCase> prepare(const std::vector<BenchmarkCase>& cases);

SolverResult solve_looped(const NormalizedQuote& q);

/// Total volatility returned by the given variant.
double solve_variant(const NormalizedQuote& q, Variant variant);

/// Max unpolished ulp error allowed per dataset: ten times the published
/// fixed-count figure.
double unpolished_ulp_budget(DatasetName name) noexcept;

using BranchShares = std::array<double, kGuessBranchCount>;

struct AccuracyReport {
    DatasetName dataset;
    Variant variant;
    std::size_t count = 0;
    double max_ulp = 0.0;
    double mean_ulp = 0.0;
    double median_ulp = 0.0;
    double p95_ulp = 0.0;
    double max_abs_error = 0.0;
    double max_rel_error = 0.0;
    BranchShares branch_shares{};
    std::size_t main_path = 0;           // solves through the H3 chain
    std::size_t fixed_count_violations = 0;  // main-path solves not 1 fast + 2 or 3 exact
    std::size_t safety_fires = 0;
    std::size_t safety_fires_inner = 0;  // fires with |x| <= 2
    double safety_rate = 0.0;
};

/// Throws Error(SchemaViolation) if cases is empty or mixes datasets.
AccuracyReport evaluate_accuracy(const std::vector<BenchmarkCase>& cases, Variant variant);

/// Shares of each GuessBranch over all cases, summing to 1.
BranchShares branch_shares(const std::vector<BenchmarkCase>& cases);

/// Relative error of the dispatched seed against v_ref for every case that
/// reaches the general dispatch (the Bachelier box excluded).
std::vector<double> seed_errors(const std::vector<BenchmarkCase>& cases);

struct Summary {
    double mean = 0.0;
    double median = 0.0;
    double p95 = 0.0;
    double max = 0.0;
};

/// Order statistics use the nearest-rank definition. Empty input gives zeros.
Summary summarize(std::vector<double> values);

struct LatencyReport {
    Variant variant;
    double ns_per_call = 0.0;  // median over runs of the minimum over sweeps
    int sweeps = 0;
    int runs = 0;
    std::size_t cases = 0;
};

inline constexpr int kMinSweeps = 500;
inline constexpr int kMinRuns = 3;

/// Single-threaded; sweeps of the variants are interleaved. Throws
/// Error(DomainError) if sweeps < 500 or runs < 3.
std::vector<LatencyReport> measure_latency(const std::vector<PreparedCase>& cases,
                                           const std::vector<Variant>& variants, int sweeps = kMinSweeps,
                                           int runs = kMinRuns);

LatencyReport measure_latency(const std::vector<PreparedCase>& cases, Variant variant, int sweeps = kMinSweeps,
                              int runs = kMinRuns);

struct ErfcxTiming {
    double fast_ns = 0.0;
    double exact_ns = 0.0;
};

/// Tight loop over a fixed argument table spanning [-3, 6].
ErfcxTiming measure_erfcx(int sweeps = kMinSweeps, int runs = kMinRuns);

/// Iterates of the main path: seed, after the fast step, after exact steps 1 and 2.
struct StageTrace {
    GuessBranch branch;
    double seed;
    double fast;
    double exact1;
    double exact2;
};

/// Throws Error(DomainError) for quotes routed to the Bachelier or upper branch.
StageTrace trace_stages(const NormalizedQuote& q);

inline constexpr double kSliceFloor = 1e-18;

struct SliceRow {
    double x;
    double v_ref;
    double c_ref;
    GuessBranch branch;
    double seed_err;
    double fast_err;
    double exact1_err;
    double exact2_err;
    double resolution;  // relative v change equivalent to a few ulps of ln c
};

/// Relative total-volatility error after each stage on a fixed-x slice, with
/// errors floored at 1e-18. Points whose price leaves the main path or is
/// subnormal are skipped.
///
/// resolution = 4 eps (max(1, |ln c|) + (N+ + N-) / (N+ - N-)) / (v l'(v)),
/// the relative v change matching the rounding noise of the log-price
/// objective. Errors below it cannot be ordered.
std::vector<SliceRow> convergence_slices(const std::vector<double>& xs, double v_min, double v_max, int points);

}  // namespace flashiv::bench
