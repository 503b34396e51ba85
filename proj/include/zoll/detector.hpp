#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace zoll {

/// Binned pairwise differences lambda - mu in [0, W] among the retained eigenvalues.
struct SigmaHistogram {
    double window = 10.0;
    std::vector<double> edges;  // bins + 1 edges
    std::vector<long> counts;
    double covered_fraction = 0.0;  // bins with at least one difference
    std::size_t used_values = 0;
};

struct DetectorOptions {
    double window = 10.0;
    int bins = 200;
    /// Only the top (1 - lower_fraction) of the distinct eigenvalues enter the histogram and the
    /// net fit: Sigma collects closure points of differences, which only high frequencies see.
    double lower_fraction = 0.5;
    double gap_min = 0.5;
    double ulf_length = 0.5;
    int ulf_count = 5;
    double net_tolerance = 0.05;     // residual threshold as a fraction of the net spacing 2pi/T
    double covered_threshold = 0.5;  // histogram coverage that rules Zoll out
    double merge_tol = 1e-9;         // values closer than this are one eigenvalue
};

/// Sorted distinct values (merging within tol). Throws PreconditionError on non-finite input.
std::vector<double> distinct_values(std::vector<double> values, double tol = 1e-9);

/// Upper part of a sorted list: the values with index >= floor(lower_fraction * n).
std::vector<double> upper_part(const std::vector<double>& sorted, double lower_fraction);

/// Throws PreconditionError for fewer than two eigenvalues.
SigmaHistogram sigma_histogram(const std::vector<double>& spectrum, double window, int bins,
                               double lower_fraction = 0.5, double merge_tol = 1e-9);

struct GapResult {
    bool flag = true;
    double gap = 0.0;  // min distance between distinct eigenvalues (infinity if fewer than two)
};
GapResult gap_test(const std::vector<double>& spectrum, double c_min, double merge_tol = 1e-9);

struct UlfResult {
    bool flag = true;
    int worst_count = 0;
    double worst_start = 0.0;  // left end of a window attaining worst_count
};
/// Max number of distinct eigenvalues in a closed window [x, x + length].
UlfResult ulf_test(const std::vector<double>& spectrum, double length, int m, double merge_tol = 1e-9);

struct NetFit {
    bool ok = false;        // a net was fitted; see residual for its quality
    double period = 0.0;    // T
    double spacing = 0.0;   // 2pi / T
    double sigma = 0.0;     // offset in [0, 1)
    double max_residual = 0.0;
    double rms_residual = 0.0;
    std::size_t used_values = 0;
    int iterations = 0;
    std::string diagnostic;
};
/// lambda_j ~ (2pi/T)(sigma + n_j): spacing from the dominant difference peak (bins relative to the
/// median gap), coherence scan around it, then alternating integer rounding and linear regression.
/// Needs at least 10 retained values, otherwise ok = false.
NetFit net_fit(const std::vector<double>& spectrum, double lower_fraction = 0.5, double merge_tol = 1e-9);

enum class Verdict { ZollConsistent, NotZollConsistent, Inconclusive };
std::string_view to_string(Verdict v);

struct ZollVerdict {
    GapResult gap;
    double gap_min = 0.0;
    UlfResult ulf;
    double ulf_length = 0.0;
    int ulf_count = 0;
    NetFit net;
    bool net_flag = false;
    double net_threshold = 0.0;
    SigmaHistogram histogram;
    Verdict verdict = Verdict::Inconclusive;
    std::string rule;  // which rule fired
};

/// Verdict precedence: histogram coverage >= covered_threshold gives not-zoll-consistent; otherwise
/// a net residual <= net_tolerance * spacing gives zoll-consistent; otherwise inconclusive.
ZollVerdict detect_zoll(const std::vector<double>& spectrum, const DetectorOptions& options = {});

/// Eigenvalues of sqrt(Laplacian) with multiplicity for built-in models: "sphere" (l <= bound) or
/// "torus" (|k| <= bound).
std::vector<double> model_spectrum(std::string_view model, double bound);

}  // namespace zoll
