#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "zoll/base_quadrature.hpp"
#include "zoll/region.hpp"
#include "zoll/surface.hpp"

namespace zoll {

/// One real eigenfunction. Sphere: real spherical harmonic Y(l, m) (m < 0 sine, m > 0 cosine).
/// Torus: constant (k = 0), cos(k.x) or sin(k.x) with k in the upper half lattice.
struct BasisFunction {
    int l = 0;
    int m = 0;
    int k1 = 0;
    int k2 = 0;
    bool sine = false;
    std::string label;
};

struct Eigenspace {
    double lambda = 0.0;
    std::vector<BasisFunction> basis;
    std::size_t offset = 0;  // position of the first basis function in the global ordering

    int multiplicity() const { return static_cast<int>(basis.size()); }
};

/// Eigenvalues of sqrt(Laplacian) with real orthonormal eigenspace bases.
/// Sphere truncation keeps degrees l <= lambda_max; torus keeps lattice points |k| <= lambda_max.
class SpectrumTable {
public:
    SpectrumTable(SurfaceModel model, double lambda_max, std::vector<Eigenspace> spaces);

    const SurfaceModel& model() const { return model_; }
    double lambda_max() const { return lambda_max_; }
    const std::vector<Eigenspace>& spaces() const { return spaces_; }
    std::size_t size() const { return spaces_.size(); }
    std::size_t basis_size() const { return basis_size_; }

    std::vector<double> eigenvalues() const;
    std::vector<int> multiplicities() const;
    /// Every eigenvalue repeated by multiplicity, in basis order.
    std::vector<double> eigenvalue_per_basis() const;
    /// Index of the eigenspace with |lambda - value| <= tol. Throws PreconditionError.
    std::size_t index_of(double lambda, double tol = 1e-9) const;

    /// All basis functions at x, in global order.
    Eigen::VectorXd evaluate(const ChartPoint& x) const;
    double evaluate(std::size_t global_index, const ChartPoint& x) const;
    /// Maximum basis degree (sphere) or frequency (torus); used to size quadratures.
    int max_frequency() const;

private:
    SurfaceModel model_;
    double lambda_max_;
    std::vector<Eigenspace> spaces_;
    std::size_t basis_size_ = 0;
};

/// Closed-form table. Throws UnsupportedError for surfaces of revolution.
SpectrumTable eigenbasis(const SurfaceModel& model, double lambda_max);

/// Orthonormalized associated Legendre values Q[l(l+1)/2 + m] for 0 <= m <= l <= L at z = cos(colat),
/// with s = sin(colat); Y(l, 0) = Q, Y(l, +-m) = sqrt(2) Q cos/sin(m phi).
void normalized_legendre(int L, double z, double s, std::vector<double>& Q);

struct MassMatrix {
    double lambda = 0.0;
    std::string weight_label;
    Eigen::MatrixXd matrix;
    double error_estimate = 0.0;   // max entry change under mesh refinement
    bool accuracy_warning = false;
};

/// Quadrature sized for the table's highest frequency.
BaseQuadratureSpec spectral_quadrature(const SpectrumTable& table);

/// Full Gram matrix G_ij = int w phi_i phi_j over the truncated basis.
Eigen::MatrixXd weighted_gram(const SpectrumTable& table, const BaseWeight& weight, const BaseQuadratureSpec& spec);
Eigen::MatrixXd weighted_gram(const SpectrumTable& table, const BaseWeight& weight);

/// Diagonal eigenspace blocks of the Gram matrix under one quadrature.
std::vector<Eigen::MatrixXd> eigenspace_grams(const SpectrumTable& table, const BaseWeight& weight,
                                              const BaseQuadratureSpec& spec);

/// Eigenspace blocks of the Gram matrix, one per eigenvalue, with refinement error estimates.
std::vector<MassMatrix> mass_matrices(const SpectrumTable& table, const BaseWeight& weight,
                                      double warn_tol = 1e-8);
MassMatrix mass_matrix(const SpectrumTable& table, double lambda, const BaseWeight& weight, double warn_tol = 1e-8);
inline MassMatrix mass_matrix(const SpectrumTable& table, double lambda, const Region& region) {
    return mass_matrix(table, lambda, weight_of(region));
}

/// int w phi_{lambda,i} phi_{mu,j}.
double cross_matrix_element(const SpectrumTable& table, double lambda, double mu, int i, int j,
                            const BaseWeight& weight);

/// Number of eigenvalues <= lambda counted with multiplicity (from the table).
std::size_t counting_function(const SpectrumTable& table, double lambda);

}  // namespace zoll
