#pragma once

#include <Eigen/Dense>

#include <complex>
#include <limits>
#include <vector>

#include "zoll/region.hpp"
#include "zoll/spectral.hpp"

namespace zoll {

inline constexpr double kInfiniteHorizon = std::numeric_limits<double>::infinity();

/// f_T(s) = (1/T) int_0^T e^{ist} dt, with f_T(0) = 1 and f_inf(s) = [s == 0].
std::complex<double> filter(double T, double s);

/// H_(lambda i),(mu j) = f_T(lambda - mu) int w phi_(lambda i) phi_(mu j) on a truncated basis.
struct GramianOperator {
    double T = kInfiniteHorizon;
    std::vector<double> lambdas;  // eigenvalue of each basis function
    Eigen::MatrixXd gram;         // the real weighted Gram matrix
    Eigen::MatrixXcd H;

    bool infinite() const { return !(T < kInfiniteHorizon); }
};

struct GramianOptions {
    std::size_t basis_cap = 2500;
};

/// Real Gram matrix of the weight, on the refined spectral quadrature (the one mass matrices report).
Eigen::MatrixXd gramian_base(const SpectrumTable& table, const BaseWeight& weight,
                             const GramianOptions& options = {});

/// Throws PreconditionError if the basis exceeds the cap or T <= 0.
GramianOperator build_gramian(const SpectrumTable& table, const BaseWeight& weight, double T,
                              const GramianOptions& options = {});
GramianOperator build_gramian(const SpectrumTable& table, const Region& region, double T,
                              const GramianOptions& options = {});
/// From a precomputed Gram matrix, to sweep T without repeating the quadrature.
GramianOperator build_gramian(const SpectrumTable& table, const Eigen::MatrixXd& gram, double T);

/// Smallest eigenvalue of H (raw, not clamped). Throws NumericError if the solver fails.
double observability_constant(const GramianOperator& g);

/// Bracket [1/2 min(g1, g2_open), 1/2 min(g1, g2_closed)] for C_T.
struct SandwichBracket {
    double low = 0.0;
    double high = 0.0;
};
SandwichBracket sandwich_bracket(double g1, double g2_open, double g2_closed);

struct MVCheck {
    double lhs = 0.0;
    double bound = 0.0;
    bool ok = true;
};
/// |sum_{j != k} a_j conj(b_k) / (lambda_j - lambda_k)| against (pi / delta) |a| |b|.
/// Throws PreconditionError unless consecutive lambdas are increasing by at least delta > 0.
MVCheck mv_bilinear_check(const std::vector<double>& lambdas, double delta, const Eigen::VectorXcd& a,
                          const Eigen::VectorXcd& b);

struct NormProbe {
    std::vector<double> horizons;
    std::vector<double> norms;  // spectral norm of A_T - A_inf
    double slope = 0.0;         // least-squares slope of log norm against log T
    double intercept = 0.0;
};
/// Throws PreconditionError if the table's spectrum has no gap >= gap_min.
NormProbe norm_convergence_probe(const SpectrumTable& table, const BaseWeight& weight, const std::vector<double>& T,
                                 double gap_min = 0.5, const GramianOptions& options = {});

}  // namespace zoll
