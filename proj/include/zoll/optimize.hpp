#pragma once

#include <functional>
#include <vector>

namespace zoll::opt {

struct SimplexOptions {
    double initial_step = 0.1;   // simplex edge in every coordinate
    double size_tol = 1e-9;      // stop when the characteristic simplex size falls below
    int max_iterations = 400;
};

struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Derivative-free Nelder-Mead minimization of f starting from x0.
SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> x0, const SimplexOptions& options = {});

/// Golden-section search for a minimum of a unimodal f on [a, b].
double golden_section_min(const std::function<double(double)>& f, double a, double b,
                          double tol = 1e-10, int max_iterations = 200);

}  // namespace zoll::opt
