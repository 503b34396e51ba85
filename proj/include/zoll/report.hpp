#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zoll/surface.hpp"

namespace zoll {

/// Which side of the true value a numerical estimate sits on.
enum class EstimateTag { UpperBound, LowerBound, TwoSided };

std::string_view to_string(EstimateTag tag);

struct TracePoint {
    double parameter = 0.0;
    double value = 0.0;
};

/// A computed functional value with its certificate and convergence metadata.
struct FunctionalReport {
    std::string functional;
    double value = 0.0;
    EstimateTag tag = EstimateTag::UpperBound;

    // Certificates; whichever applies.
    std::optional<PhasePoint> argmin;
    std::optional<long> grid_index;
    std::optional<double> eigenvalue;
    std::vector<double> coefficients;
    std::string measure_label;

    std::vector<TracePoint> trace;
    bool monotone = true;  // trace nondecreasing within the stated tolerance, where monotonicity is expected
    bool partial = false;  // stopped by budget
    std::map<std::string, double> meta;
    std::vector<std::string> notes;
};

}  // namespace zoll
