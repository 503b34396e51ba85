#include "doctest.h"

#include <cmath>
#include <random>

#include "zoll/errors.hpp"
#include "zoll/gramian.hpp"
#include "zoll/measures.hpp"

using namespace zoll;

TEST_CASE("filter function") {
    CHECK(filter(3.0, 0.0) == std::complex<double>(1.0, 0.0));
    CHECK(std::abs(filter(kTwoPi, 1.0)) < 1e-15);
    for (double s : {0.3, -1.7, 5e-8, 12.0}) {
        for (double T : {1.0, kTwoPi, 40.0}) {
            const std::complex<double> f = filter(T, s);
            // Direct quadrature oracle of (1/T) int_0^T e^{ist} dt.
            std::complex<double> q = 0.0;
            const int n = 20000;
            for (int k = 0; k < n; ++k) q += std::polar(1.0, s * T * (k + 0.5) / n);
            q /= n;
            CHECK(std::abs(f - q) < 1e-6);
            CHECK(std::abs(filter(T, -s) - std::conj(f)) < 1e-15);
            CHECK(std::abs(f) <= std::min(1.0, 2.0 / (T * std::abs(s))) + 1e-15);
        }
    }
    CHECK(filter(kInfiniteHorizon, 0.2) == std::complex<double>(0.0, 0.0));
}

TEST_CASE("Gramian of the whole sphere is the identity") {
    const SurfaceModel s = SurfaceModel::sphere();
    const SpectrumTable t = eigenbasis(s, 6.0);
    for (double T : {1.0, kTwoPi, kInfiniteHorizon}) {
        const GramianOperator g = build_gramian(t, make_region(s, "full"), T);
        const auto n = g.H.rows();
        CHECK((g.H - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(observability_constant(g) == doctest::Approx(1.0).epsilon(1e-10));
    }
    CHECK(observability_constant(build_gramian(t, make_region(s, "empty"), 3.0)) == doctest::Approx(0.0));
}

TEST_CASE("Gramian structure on the hemisphere") {
    const SurfaceModel s = SurfaceModel::sphere();
    const SpectrumTable t = eigenbasis(s, 8.0);
    const Region hemi = make_region(s, "cap(lat>=0)");
    const Eigen::MatrixXd G = gramian_base(t, weight_of(hemi));
    const GramianOperator g = build_gramian(t, G, 4 * kPi);
    CHECK((g.H - g.H.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(observability_constant(g) >= -1e-9);

    // Infinite horizon: block diagonal, smallest eigenvalue equals g1.
    const GramianOperator inf = build_gramian(t, G, kInfiniteHorizon);
    CHECK(observability_constant(inf) == doctest::Approx(g1(t, hemi).value).epsilon(1e-8));
    CHECK_THROWS_AS(build_gramian(t, weight_of(hemi), 1.0, {.basis_cap = 10}), PreconditionError);
}

TEST_CASE("Montgomery-Vaughan bilinear bound") {
    std::vector<double> lambdas;
    for (int j = 0; j < 40; ++j) lambdas.push_back(j);
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(40);
    e[3] = 1.0;
    CHECK(mv_bilinear_check(lambdas, 1.0, e, e).lhs == 0.0);
    std::mt19937_64 rng(7);
    std::normal_distribution<double> N;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::VectorXcd a(40), b(40);
        for (int j = 0; j < 40; ++j) {
            a[j] = {N(rng), N(rng)};
            b[j] = {N(rng), N(rng)};
        }
        const MVCheck r = mv_bilinear_check(lambdas, 1.0, a, b);
        CHECK(r.ok);
        worst = std::max(worst, r.lhs / (a.norm() * b.norm()));
    }
    CHECK(worst < kPi);
    CHECK_THROWS_AS(mv_bilinear_check({0.0, 0.5}, 1.0, Eigen::VectorXcd::Ones(2), Eigen::VectorXcd::Ones(2)),
                    PreconditionError);
}

TEST_CASE("norm convergence probe") {
    const SurfaceModel s = SurfaceModel::sphere();
    const SpectrumTable t = eigenbasis(s, 12.0);
    const std::vector<double> T{4 * kPi, 8 * kPi, 16 * kPi, 32 * kPi};
    const NormProbe full = norm_convergence_probe(t, weight_of(make_region(s, "full")), T);
    for (double n : full.norms) CHECK(n < 1e-12);
    const NormProbe hemi = norm_convergence_probe(t, weight_of(make_region(s, "cap(lat>=0)")), T);
    MESSAGE("hemisphere slope ", hemi.slope);
    for (std::size_t i = 1; i < hemi.norms.size(); ++i) CHECK(hemi.norms[i] < hemi.norms[i - 1]);
    CHECK_THROWS_AS(norm_convergence_probe(eigenbasis(SurfaceModel::torus(), 3.0), weight_of(make_region(s, "full")), T),
                    PreconditionError);
}
