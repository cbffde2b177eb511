#pragma once

// Benchmark dataset reconstruction. Each dataset is a fixed lattice in
// (K/F, T, sigma) or (x, c); reference prices come from the double-double
// oracle and are rounded to double.

#include <array>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

namespace flashiv {

enum class DatasetName { CLY3D, CLY20, CLY80, Jaeckel, Market, Corners, Stress, HighVol };

inline constexpr std::array<DatasetName, 8> kAllDatasets = {
    DatasetName::CLY3D,   DatasetName::CLY20,   DatasetName::CLY80,  DatasetName::Jaeckel,
    DatasetName::Market,  DatasetName::Corners, DatasetName::Stress, DatasetName::HighVol,
};

std::string_view to_string(DatasetName name) noexcept;

/// Case-insensitive; '-' and '_' are ignored ("cly-3d" == "CLY3D").
std::optional<DatasetName> parse_dataset_name(std::string_view text);

struct DatasetSpec {
    DatasetName name;
    double price_floor;   // cases with c_ref below this are dropped
    double price_min;     // exclusive lower bound on c_ref (0 unless the dataset filters)
    double price_max;     // exclusive upper bound on c_ref
    int nominal_count;    // size of the original benchmark set, for reference
};

DatasetSpec dataset_spec(DatasetName name);

struct BenchmarkCase {
    DatasetName dataset;
    double x;
    double expiry;
    double v_ref;
    double c_ref;
};

/// Deterministic: the same spec always yields bit-identical cases, sorted by x then v_ref.
std::vector<BenchmarkCase> build_dataset(const DatasetSpec& spec);

inline std::vector<BenchmarkCase> build_dataset(DatasetName name) { return build_dataset(dataset_spec(name)); }

inline constexpr std::string_view kCsvHeader = "dataset,x,T,v_ref,c_ref";

/// Header plus one row per case, doubles in shortest round-trip form.
void write_csv(std::ostream& out, const std::vector<BenchmarkCase>& cases);

/// Throws Error(SchemaViolation) on a missing or wrong header, a wrong field
/// count, an unknown dataset tag or an unparseable or out-of-range number.
std::vector<BenchmarkCase> read_csv(std::istream& in);

}  // namespace flashiv
