#include "doctest.h"

#include <cmath>

#include "zoll/errors.hpp"
#include "zoll/functionals.hpp"

using namespace zoll;

namespace {

// Inclination oracle: fraction of a great circle with inclination i spent in |lat| <= alpha,
// measured by brute-force arc sampling.
double band_fraction(double incl, double alpha) {
    const int N = 200000;
    int inside = 0;
    for (int j = 0; j < N; ++j) {
        const double t = kTwoPi * (j + 0.5) / N;
        const double lat = std::asin(std::sin(incl) * std::sin(t));
        if (std::abs(lat) <= alpha) ++inside;
    }
    return static_cast<double>(inside) / N;
}

}  // namespace

TEST_CASE("g2T of a constant") {
    const auto s = SurfaceModel::sphere();
    const GeodesicFlow flow(s);
    const auto r = g2T(flow, Observable::constant(0.25), 3.0, PhaseGrid::product(s, 8, 8));
    CHECK(r.value == 0.25);
}

TEST_CASE("g2T sphere band against the inclination oracle") {
    const auto s = SurfaceModel::sphere();
    const GeodesicFlow flow(s);
    double oracle = 1.0, best_incl = 0.0;
    for (int i = 0; i <= 90; ++i) {
        const double incl = kPi / 2 * i / 90.0;
        const double f = band_fraction(incl, kPi / 6);
        if (f < oracle) {
            oracle = f;
            best_incl = incl;
        }
    }
    CHECK(oracle == doctest::Approx(1.0 / 3.0).epsilon(1e-4));
    CHECK(best_incl == doctest::Approx(kPi / 2));

    const Observable band = Observable::indicator(make_region(s, "band(|lat|<=pi/6)"));
    const auto r = g2T(flow, band, kTwoPi, PhaseGrid::standard(s));
    CHECK(std::abs(r.value - oracle) <= 1e-3);
    const auto [p, v] = s.embed_phase(*r.argmin);
    const double incl = std::acos(std::abs(p.cross(v).normalized().z()));
    CHECK(std::abs(incl - kPi / 2) <= 0.02);
}

TEST_CASE("g2T torus strip is attained by a vertical orbit") {
    const auto t = SurfaceModel::torus();
    const GeodesicFlow flow(t);
    const Observable strip = Observable::indicator(make_region(t, "strip(0,1)"));
    const auto r = g2T(flow, strip, kTwoPi, PhaseGrid::standard(t));
    CHECK(std::abs(r.value) <= 1e-9);
}

TEST_CASE("g2 doubling on sphere band and torus strip") {
    const auto s = SurfaceModel::sphere();
    const GeodesicFlow fs(s);
    const Observable band = Observable::indicator(make_region(s, "band(|lat|<=pi/6)"));
    const auto r = g2(fs, band, PhaseGrid::standard(s));
    CHECK(std::abs(r.value - 1.0 / 3.0) <= 2e-3);
    CHECK(r.trace.size() >= 3);

    const auto t = SurfaceModel::torus();
    const GeodesicFlow ft(t);
    const Observable strip = Observable::indicator(make_region(t, "strip(0,1)"));
    const auto rt = g2(ft, strip, PhaseGrid::standard(t));
    CHECK(std::abs(rt.value) <= 1e-9);

    const auto rc = g2(ft, Observable::constant(0.4), PhaseGrid::product(t, 4, 4));
    for (const auto& tp : rc.trace) CHECK(tp.value == 0.4);
}

TEST_CASE("doubling trace is nondecreasing on a fixed grid") {
    const auto t = SurfaceModel::torus();
    const GeodesicFlow ft(t);
    const Observable a = Observable::pullback(
        "bump", [](const ChartPoint& x) { return 0.5 + 0.25 * std::cos(x.x[0]) + 0.25 * std::sin(2 * x.x[1]); }, 0.0, 1.0);
    G2Options opt;
    opt.refine = false;
    DoublingOptions sched;
    sched.T0 = 1.0;
    sched.K = 5;
    sched.tol = 0.0;
    const auto r = g2(ft, a, PhaseGrid::product(t, 12, 16), sched, opt);
    CHECK(r.monotone);
    for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i].value >= r.trace[i - 1].value - 1e-12);
}

TEST_CASE("g2prime examples") {
    const auto s = SurfaceModel::sphere();
    const GeodesicFlow fs(s);
    const Observable band = Observable::indicator(make_region(s, "band(|lat|<=pi/6)"));
    const auto r = g2prime(fs, band, PhaseGrid::standard(s), multiples(kTwoPi * 8, 5));
    CHECK(std::abs(r.value - 1.0 / 3.0) <= 2e-3);

    const auto t = SurfaceModel::torus();
    const GeodesicFlow ft(t);
    const Observable a =
        Observable::pullback("(1+cos x1)/2", [](const ChartPoint& x) { return 0.5 * (1 + std::cos(x.x[0])); }, 0, 1);
    const double mean = t.integrate([&](const ChartPoint& x) { return a.base_value(x); }) / t.total_area();
    TailOptions opt;
    opt.refine = false;
    const PhasePoint z = t.make_phase_point(0, {0.3, 0.2}, {1.0, std::sqrt(2.0)});
    const auto ri = g2prime(ft, a, PhaseGrid::single(z), multiples(100.0, 10), opt);
    CHECK(std::abs(ri.value - mean) <= 1e-2);
    CHECK(g2prime(ft, Observable::constant(0.6), PhaseGrid::single(z), {1.0, 2.0}).value == 0.6);
}

TEST_CASE("superadditivity of T g2T") {
    const auto t = SurfaceModel::torus();
    const GeodesicFlow ft(t);
    const Observable a = Observable::pullback(
        "f", [](const ChartPoint& x) { return 0.5 + 0.3 * std::cos(x.x[0]) * std::cos(x.x[1]) + 0.1 * std::sin(x.x[1]); },
        0.0, 1.0);
    const PhaseGrid grid = PhaseGrid::product(t, 24, 32);
    for (auto [T1, T2] : {std::pair{1.0, 2.0}, std::pair{2.5, 3.5}, std::pair{3.0, 3.0}}) {
        const double g1 = g2T(ft, a, T1, grid).value, g2v = g2T(ft, a, T2, grid).value;
        const double g12 = g2T(ft, a, T1 + T2, grid).value;
        CHECK((T1 + T2) * g12 >= T1 * g1 + T2 * g2v - 2e-3 * (T1 + T2));
    }
}

TEST_CASE("g2T is flow invariant") {
    const auto s = SurfaceModel::sphere();
    const GeodesicFlow fs(s);
    const Observable a = Observable::indicator(make_region(s, "band(|lat|<=pi/6)"));
    const double base = g2T(fs, a, 4.0, PhaseGrid::product(s, 24, 32)).value;
    for (double shift : {0.7, 2.0}) {
        const Observable moved = Observable::smooth_symbol(
            "shifted", [&, shift](const PhasePoint& z) { return a(fs.flow(z, shift)); }, 0.0, 1.0);
        G2Options opt;
        opt.birkhoff.rule = BirkhoffRule::Midpoint;
        opt.birkhoff.nodes_per_unit_time = 256;
        CHECK(std::abs(g2T(fs, moved, 4.0, PhaseGrid::product(s, 24, 32), opt).value - base) <= 1e-2);
    }
}

TEST_CASE("mollifier approximation of an open band") {
    const auto s = SurfaceModel::sphere();
    const GeodesicFlow fs(s);
    const Region band = make_region(s, "band(|lat|<pi/6)");
    const PhaseGrid grid = PhaseGrid::product(s, 24, 32);
    double prev = -1.0;
    for (int k : {1, 2, 4, 8, 16, 32}) {
        const double v = g2T(fs, mollifier(band, k), kTwoPi, grid).value;
        CHECK(v >= prev - 1e-6);
        prev = v;
    }
    const double limit = g2T(fs, Observable::indicator(band), kTwoPi, grid).value;
    CHECK(prev <= limit + 1e-6);
    // Along the polar circle each of the four boundary crossings loses a ramp of area 1/(2k).
    CHECK(limit - prev == doctest::Approx(1.0 / (kPi * 32)).epsilon(1e-3));

    // A cap has two crossings per great circle, which halves the gap.
    const Region cap = make_region(s, "cap(lat>-pi/6)");
    const double cap_limit = g2T(fs, Observable::indicator(cap), kTwoPi, grid).value;
    const double cap32 = g2T(fs, mollifier(cap, 32), kTwoPi, grid).value;
    CHECK(cap_limit - cap32 <= 5e-3);
}

TEST_CASE("stabilization horizon on the sphere") {
    const auto s = SurfaceModel::sphere();
    const GeodesicFlow fs(s);
    const Observable band = Observable::indicator(make_region(s, "band(|lat|<=pi/6)"));
    G2Options opt;
    opt.seeds = 3;
    const double T = stabilization_horizon(fs, band, PhaseGrid::product(s, 24, 32), 1.5 * kPi, 2.5 * kPi, opt);
    CHECK(std::abs(T - kTwoPi) <= 0.01 * kTwoPi);
}

TEST_CASE("witness set for a non-periodic torus ray") {
    const auto t = SurfaceModel::torus();
    const GeodesicFlow ft(t);
    const PhasePoint z = t.make_phase_point(0, {0.1, 0.2}, {1.0, std::sqrt(2.0)});
    const int K = 4;
    const double r = 0.01;
    const Region w = build_ray_witness(ft, z, K, r);
    CHECK(w.topology() == Region::Topology::Closed);
    const Observable chi = Observable::indicator(w);
    // The orbit from gamma(2^k) runs inside a tube for time k, so g2^k(w) = 0.
    const auto seeds = ray_witness_seeds(ft, z, K);
    for (int k = 1; k <= K; ++k) {
        CHECK(birkhoff_average(ft, chi, seeds[static_cast<std::size_t>(k - 1)], k) == 0.0);
        G2Options opt;
        opt.refine = false;
        CHECK(g2T(ft, chi, k, PhaseGrid::product(t, 6, 8).with(seeds), opt).value == 0.0);
    }
    // Running average along gamma at 2^k against the idealized 1 - sum_{j<k} j / 2^k.
    const Region w8 = build_ray_witness(ft, z, 8, r);
    const double run = birkhoff_average(ft, Observable::indicator(w8), z, 256.0);
    CHECK(run >= 1.0 - 28.0 / 256.0 - 0.05);
    CHECK(run <= 1.0 - 28.0 / 256.0 + 1e-9);
    CHECK_THROWS_AS(build_ray_witness(ft, t.make_phase_point(0, {0, 0}, {1, 1}), 3, 0.01), PreconditionError);
}
