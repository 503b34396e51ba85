#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "zoll/detector.hpp"
#include "zoll/measures.hpp"
#include "zoll/report.hpp"
#include "zoll/spectral.hpp"

namespace zoll {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// {"schema_version": 1, "kind": kind} followed by the payload keys.
json document(const std::string& kind);

json to_json(const PhasePoint& z);
PhasePoint phase_point_from_json(const json& j);
json to_json(const FunctionalReport& r);
json to_json(const ZollVerdict& v);

/// spectrum.json: eigenvalues with multiplicities and the basis ordering.
json spectrum_json(const SpectrumTable& table);
/// mass_matrix.json: one block per eigenspace, rows in basis order.
json mass_matrix_json(const SpectrumTable& table, const std::vector<MassMatrix>& blocks);

/// Variant-tagged measure objects. Eigenfunction densities store lambda_max and are rebuilt
/// against `table` when given, otherwise against a fresh closed-form table of that size.
json to_json(const InvariantMeasure& mu);
InvariantMeasure measure_from_json(const json& j, const SurfaceModel& model,
                                   std::shared_ptr<const SpectrumTable> table = nullptr);

/// Pretty-printed with two-space indent and a trailing newline. Creates parent directories.
void write_json(const std::filesystem::path& path, const json& j);
json read_json(const std::filesystem::path& path);

/// Comma-separated, header line first, numbers in shortest round-trip form.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// Shortest decimal string that parses back to x ("inf", "-inf", "nan" for non-finite values).
std::string format_double(double x);

/// Eigenvalues from text: one real per line, '#' starts a comment. Throws ParseError with the line.
std::vector<double> parse_eigenvalues(const std::string& text);

}  // namespace zoll
