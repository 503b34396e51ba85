#include "doctest.h"

#include <gsl/gsl_sf_legendre.h>

#include <cmath>

#include "zoll/errors.hpp"
#include "zoll/spectral.hpp"

using namespace zoll;

namespace {

BaseWeight unit_weight() { return {"1", [](const ChartPoint&) { return 1.0; }, {}}; }

ChartPoint sphere_point(double z, double phi) { return {0, {std::acos(z), phi}}; }

}  // namespace

TEST_CASE("sphere spectrum table") {
    const SpectrumTable t = eigenbasis(SurfaceModel::sphere(), 2.0);
    REQUIRE(t.size() == 3);
    CHECK(t.multiplicities() == std::vector<int>{1, 3, 5});
    CHECK(t.eigenvalues()[1] == doctest::Approx(std::sqrt(2.0)));
    CHECK(t.eigenvalues()[2] == doctest::Approx(std::sqrt(6.0)));
    CHECK(t.basis_size() == 9);
    CHECK(t.spaces()[2].basis[0].label == "Y(2,-2)");
    CHECK(counting_function(t, 1.5) == 4);
}

TEST_CASE("torus spectrum table") {
    const SpectrumTable t = eigenbasis(SurfaceModel::torus(), 1.5);
    REQUIRE(t.size() == 3);
    CHECK(t.multiplicities() == std::vector<int>{1, 4, 4});
    CHECK(t.eigenvalues()[2] == doctest::Approx(std::sqrt(2.0)));
    CHECK(t.index_of(1.0) == 1);
    CHECK_THROWS_AS(t.index_of(1.2), PreconditionError);
}

TEST_CASE("revolution surfaces have no closed-form basis") {
    CHECK_THROWS_AS(eigenbasis(SurfaceModel::zoll_revolution_demo(), 3.0), UnsupportedError);
}

TEST_CASE("low-degree harmonics match closed forms") {
    const SpectrumTable t = eigenbasis(SurfaceModel::sphere(), 2.0);
    const double z = 0.3, phi = 1.1;
    const double s = std::sqrt(1 - z * z);
    const double x = s * std::cos(phi), y = s * std::sin(phi);
    const Eigen::VectorXd v = t.evaluate(sphere_point(z, phi));
    const double c1 = std::sqrt(3.0 / (4 * kPi));
    CHECK(v[0] == doctest::Approx(1.0 / std::sqrt(4 * kPi)));
    CHECK(v[1] == doctest::Approx(c1 * y));
    CHECK(v[2] == doctest::Approx(c1 * z));
    CHECK(v[3] == doctest::Approx(c1 * x));
    CHECK(v[6] == doctest::Approx(std::sqrt(5.0 / (16 * kPi)) * (3 * z * z - 1)));
    CHECK(v[8] == doctest::Approx(std::sqrt(15.0 / (16 * kPi)) * (x * x - y * y)));
    CHECK(v[4] == doctest::Approx(std::sqrt(15.0 / (4 * kPi)) * x * y));
}

TEST_CASE("normalized Legendre values agree with GSL up to the Condon-Shortley phase") {
    const int L = 40;
    std::vector<double> Q;
    for (double z : {-0.95, -0.2, 0.0, 0.37, 0.999}) {
        normalized_legendre(L, z, std::sqrt(1 - z * z), Q);
        for (int l = 0; l <= L; ++l) {
            for (int m = 0; m <= l; ++m) {
                const double ref = gsl_sf_legendre_sphPlm(l, m, z) * (m % 2 ? -1.0 : 1.0);
                CHECK(Q[l * (l + 1) / 2 + m] == doctest::Approx(ref).epsilon(1e-10).scale(1.0));
            }
        }
    }
}

TEST_CASE("bases are orthonormal") {
    for (const auto& [model, lmax] : {std::pair{SurfaceModel::sphere(), 12.0}, std::pair{SurfaceModel::torus(), 6.0}}) {
        const SpectrumTable t = eigenbasis(model, lmax);
        const Eigen::MatrixXd G = weighted_gram(t, unit_weight());
        const auto n = static_cast<Eigen::Index>(t.basis_size());
        CHECK((G - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("hemisphere mass matrices are half the identity") {
    const SurfaceModel s = SurfaceModel::sphere();
    const SpectrumTable t = eigenbasis(s, 30.0);
    const std::vector<MassMatrix> m = mass_matrices(t, weight_of(make_region(s, "cap(lat>0)")));
    REQUIRE(m.size() == 31);
    double worst = 0.0;
    for (const MassMatrix& mm : m) {
        const auto d = mm.matrix.rows();
        worst = std::max(worst, (mm.matrix - 0.5 * Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff());
        CHECK_FALSE(mm.accuracy_warning);
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("torus strip entry for cos(x2)") {
    const SurfaceModel t = SurfaceModel::torus();
    const SpectrumTable table = eigenbasis(t, 1.0);
    const double w = 1.0;
    const MassMatrix m = mass_matrix(table, 1.0, make_region(t, "strip(0,1)"));
    // Basis of lambda = 1: cos(0,1), sin(0,1), cos(1,-1)... find cos(x2) by label.
    const Eigenspace& e = table.spaces()[1];
    int idx = -1;
    for (int i = 0; i < e.multiplicity(); ++i) {
        if (e.basis[i].label == "cos(0,1)") idx = i;
    }
    REQUIRE(idx >= 0);
    CHECK(m.matrix(idx, idx) == doctest::Approx(w / (2 * kPi)).epsilon(1e-10));
}

TEST_CASE("hemisphere cross element between Y00 and Y10") {
    const SurfaceModel s = SurfaceModel::sphere();
    const SpectrumTable t = eigenbasis(s, 2.0);
    const double v = cross_matrix_element(t, 0.0, std::sqrt(2.0), 0, 1, weight_of(make_region(s, "cap(lat>0)")));
    CHECK(v == doctest::Approx(std::sqrt(3.0) / 4).epsilon(1e-10));
}

TEST_CASE("counting function follows the Weyl law") {
    const SpectrumTable s = eigenbasis(SurfaceModel::sphere(), 60.0);
    const SpectrumTable t = eigenbasis(SurfaceModel::torus(), 60.0);
    for (double lam : {30.0, 60.0}) {
        CHECK(counting_function(s, lam) / (lam * lam) == doctest::Approx(1.0).epsilon(0.05));
        CHECK(counting_function(t, lam) / (kPi * lam * lam) == doctest::Approx(1.0).epsilon(0.05));
    }
}

TEST_CASE("mass matrix spectra lie in [0, 1]") {
    const SurfaceModel s = SurfaceModel::sphere();
    const SpectrumTable t = eigenbasis(s, 8.0);
    for (const MassMatrix& m :
         mass_matrices(t, weight_of(make_region(s, "union(cap(lat>0.9),tube(meridian(1),0.3))")), 1e-6)) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.matrix);
        CHECK(es.eigenvalues().minCoeff() >= -1e-8);
        CHECK(es.eigenvalues().maxCoeff() <= 1 + 1e-8);
    }
}
