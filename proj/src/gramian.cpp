#include "zoll/gramian.hpp"

#include <cmath>

#include "zoll/detector.hpp"
#include "zoll/errors.hpp"

namespace zoll {

std::complex<double> filter(double T, double s) {
    if (!(T > 0.0)) throw PreconditionError("filter horizon must be positive");
    if (!(T < kInfiniteHorizon)) return s == 0.0 ? 1.0 : 0.0;
    const double x = s * T;
    if (std::abs(x) < 1e-6) return {1.0 - x * x / 6.0, x / 2.0};
    // (e^{ix} - 1) / (ix)
    return {std::sin(x) / x, (1.0 - std::cos(x)) / x};
}

Eigen::MatrixXd gramian_base(const SpectrumTable& table, const BaseWeight& weight, const GramianOptions& options) {
    if (table.basis_size() > options.basis_cap) {
        throw PreconditionError("basis size " + std::to_string(table.basis_size()) + " exceeds the Gramian cap " +
                                std::to_string(options.basis_cap));
    }
    return weighted_gram(table, weight, spectral_quadrature(table).refined());
}

GramianOperator build_gramian(const SpectrumTable& table, const Eigen::MatrixXd& gram, double T) {
    if (!(T > 0.0)) throw PreconditionError("Gramian horizon must be positive");
    const auto n = static_cast<Eigen::Index>(table.basis_size());
    if (gram.rows() != n || gram.cols() != n) throw PreconditionError("Gram matrix does not match the table");
    GramianOperator g;
    g.T = T;
    g.lambdas = table.eigenvalue_per_basis();
    g.gram = gram;
    g.H.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            // Same eigenvalue means the same eigenspace: the filter is exactly 1 there.
            const double s = g.lambdas[i] == g.lambdas[j] ? 0.0 : g.lambdas[i] - g.lambdas[j];
            g.H(i, j) = filter(T, s) * gram(i, j);
        }
    }
    return g;
}

GramianOperator build_gramian(const SpectrumTable& table, const BaseWeight& weight, double T,
                              const GramianOptions& options) {
    return build_gramian(table, gramian_base(table, weight, options), T);
}

GramianOperator build_gramian(const SpectrumTable& table, const Region& region, double T,
                              const GramianOptions& options) {
    return build_gramian(table, weight_of(region), T, options);
}

double observability_constant(const GramianOperator& g) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g.H, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericError("Hermitian eigen-solve failed");
    return es.eigenvalues()[0];
}

SandwichBracket sandwich_bracket(double g1, double g2_open, double g2_closed) {
    return {0.5 * std::min(g1, g2_open), 0.5 * std::min(g1, g2_closed)};
}

MVCheck mv_bilinear_check(const std::vector<double>& lambdas, double delta, const Eigen::VectorXcd& a,
                          const Eigen::VectorXcd& b) {
    if (!(delta > 0.0)) throw PreconditionError("gap delta must be positive");
    const auto n = static_cast<Eigen::Index>(lambdas.size());
    if (a.size() != n || b.size() != n) throw PreconditionError("vector lengths differ from the eigenvalue count");
    for (std::size_t i = 1; i < lambdas.size(); ++i) {
        if (lambdas[i] - lambdas[i - 1] < delta) throw PreconditionError("eigenvalues violate the gap delta");
    }
    std::complex<double> sum = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = 0; k < n; ++k) {
            if (j != k) sum += a[j] * std::conj(b[k]) / (lambdas[j] - lambdas[k]);
        }
    }
    MVCheck r;
    r.lhs = std::abs(sum);
    r.bound = kPi / delta * a.norm() * b.norm();
    r.ok = r.lhs <= r.bound;
    return r;
}

NormProbe norm_convergence_probe(const SpectrumTable& table, const BaseWeight& weight, const std::vector<double>& T,
                                 double gap_min, const GramianOptions& options) {
    if (T.size() < 2) throw PreconditionError("norm probe needs at least two horizons");
    if (!gap_test(table.eigenvalues(), gap_min).flag) {
        throw PreconditionError("the table's spectrum has no gap of size " + std::to_string(gap_min));
    }
    const Eigen::MatrixXd gram = gramian_base(table, weight, options);
    const GramianOperator inf = build_gramian(table, gram, kInfiniteHorizon);
    NormProbe p;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (double t : T) {
        const GramianOperator g = build_gramian(table, gram, t);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g.H - inf.H, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) throw NumericError("Hermitian eigen-solve failed");
        const double norm = es.eigenvalues().cwiseAbs().maxCoeff();
        p.horizons.push_back(t);
        p.norms.push_back(norm);
        const double x = std::log(t), y = std::log(std::max(norm, 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double N = static_cast<double>(T.size());
    p.slope = (N * sxy - sx * sy) / (N * sxx - sx * sx);
    p.intercept = (sy - p.slope * sx) / N;
    return p;
}

}  // namespace zoll
