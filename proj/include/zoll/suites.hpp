#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "zoll/config.hpp"
#include "zoll/functionals.hpp"
#include "zoll/io.hpp"
#include "zoll/measures.hpp"

namespace zoll {

inline constexpr const char* kVersion = "0.1.0";

/// Built-in smooth phase-space symbols, index 0..9, values in [0.3, 1.7].
Observable smooth_observable(const SurfaceModel& model, int index);

/// Observable descriptor: `indicator(<region>)`, `mollifier(<region>, k)`, `smooth(i)`, `const(c)`.
/// Throws ParseError.
Observable make_observable(const SurfaceModel& model, std::string_view descriptor);

/// Interior of a cap/band/strip/tube descriptor obtained by turning closed comparisons open.
std::string interior_descriptor(std::string_view descriptor);

/// One asserted relation `lhs rel rhs` with tolerance: "<=" is lhs <= rhs + tol, ">=" is
/// lhs >= rhs - tol, "~" is |lhs - rhs| <= tol.
struct Check {
    std::string name;
    std::string relation;
    double lhs = 0.0;
    double rhs = 0.0;
    double tol = 0.0;
    bool pass = false;
};
Check check(std::string name, double lhs, std::string relation, double rhs, double tol);
/// Recompute the verdict from the stored operands.
bool recheck(const Check& c);

/// A table destined for CSV and, when `plot` is "line" or "bars", an SVG plot of the y columns
/// against the first column.
struct Series {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::string plot = "line";
    std::string title;
};

struct RunReport {
    std::string suite;
    std::string model;
    std::string config_hash;
    std::string timestamp;
    std::vector<std::pair<std::string, FunctionalReport>> reports;
    std::vector<Check> checks;
    std::vector<std::pair<std::string, json>> records;  // detector verdicts, clusters, metadata
    std::vector<Series> series;
    std::vector<std::string> warnings;

    bool passed() const;
};

json to_json(const RunReport& r);

struct ChainOptions {
    int grid_base = 24;
    int grid_directions = 32;
    int doublings = 3;    // horizons 2pi * 2^k, k = 0..doublings
    int tail_count = 8;   // g2' horizons m * T_K, m = 1..tail_count
    double slack = 2e-3;
    G2Options g2;
    TailOptions tail;
    MeasureEvalOptions eval;
};

/// g2T <= g2 <= g2' <= g1'' <= g1' for one observable. g1'' is computed first and its minimizing
/// orbit (from the aligned start) or direction seeds the phase grids of g2' and g2.
struct ChainResult {
    std::string observable;
    FunctionalReport g2T, g2, g2p, g1pp, g1p;
    std::vector<Check> checks;
};
ChainResult run_chain(const GeodesicFlow& flow, const Observable& a, const std::vector<InvariantMeasure>& family,
                      const std::vector<InvariantMeasure>& ql, const ChainOptions& options = {});

/// Ten smooth symbols and ten mollified indicators for the sphere or the torus.
std::vector<std::string> default_chain_observables(const SurfaceModel& model);

/// Suite names accepted by run_suite.
const std::vector<std::string>& suite_names();

/// Runs a named suite and writes report.json plus one CSV per series into `out` (skipped when
/// `out` is empty). Throws ParseError for unknown suites or bad configuration values.
RunReport run_suite(const std::string& name, const Config& config, const std::filesystem::path& out);

/// Writes report.json and the CSV series.
void write_report(const RunReport& report, const std::filesystem::path& out);

/// Current UTC time, ISO 8601.
std::string utc_timestamp();

}  // namespace zoll
