#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "zoll/suites.hpp"

namespace zoll {

struct PlotStyle {
    int width = 640;
    int height = 400;
    std::string font = "sans-serif";
    bool log_x = false;
};

/// One SVG file per plottable series (`line`: y columns against the first column; `bars`: counts
/// against left bin edges). Series without rows are skipped with a warning appended to `warnings`.
std::vector<std::filesystem::path> emit_plots(const RunReport& report, const std::filesystem::path& out,
                                              const PlotStyle& style, std::vector<std::string>& warnings);

/// SVG text for one series.
std::string svg_plot(const Series& series, const PlotStyle& style);

}  // namespace zoll
