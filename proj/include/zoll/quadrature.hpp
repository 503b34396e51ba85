#pragma once

#include <functional>
#include <span>
#include <vector>

namespace zoll::quad {

/// Nodes and weights of a one-dimensional rule.
struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
};

/// n-point Gauss-Legendre rule mapped to [a, b].
Rule gauss_legendre(int n, double a = -1.0, double b = 1.0);

/// n-point Gauss-Hermite rule for the weight exp(-x^2) on the real line.
Rule gauss_hermite(int n);

/// Composite Gauss-Legendre rule: each interval between consecutive breakpoints is cut into
/// panels no longer than max_panel, each carrying an n-point rule.
Rule composite_gauss(std::span<const double> breakpoints, int n, double max_panel);

/// Sorted, deduplicated breakpoints clipped to [a, b] with a and b included.
std::vector<double> merge_breakpoints(double a, double b, std::vector<double> interior,
                                      double merge_tol = 1e-13);

/// Adaptive Gauss-Kronrod integration of a scalar function on [a, b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-12, double rel_tol = 1e-12);

}  // namespace zoll::quad
