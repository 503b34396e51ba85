#include "doctest.h"

#include <cmath>

#include "zoll/errors.hpp"
#include "zoll/surface.hpp"

using namespace zoll;

TEST_CASE("cometric examples") {
    const auto s = SurfaceModel::sphere();
    const auto z = s.phase_point_from_angle({0, {kPi / 2, 0.3}}, 0.7);
    CHECK(s.cometric(z) == doctest::Approx(1.0).epsilon(1e-12));

    const auto t = SurfaceModel::torus();
    CHECK(t.cometric({0, {1.0, 2.0}}, {3.0, 4.0}) == doctest::Approx(25.0));

    RevolutionProfile p{"round", kPi, [](double r) { return std::sin(r); }, [](double r) { return std::cos(r); }};
    const auto rev = SurfaceModel::revolution(p);
    CHECK(rev.cometric({0, {kPi / 2, 1.0}}, {0.0, 1.0}) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("cometric is 2-homogeneous") {
    const auto s = SurfaceModel::sphere();
    for (double th : {0.3, 1.0, 2.5}) {
        const ChartPoint x{0, {th, 0.4}};
        const Vec2 xi{0.3, -1.2};
        const double c = 2.7;
        CHECK(s.cometric(x, {c * xi[0], c * xi[1]}) == doctest::Approx(c * c * s.cometric(x, xi)).epsilon(1e-12));
    }
}

TEST_CASE("cometric outside the chart") {
    const auto s = SurfaceModel::sphere();
    CHECK_THROWS_AS(s.cometric({0, {0.0, 0.0}}, {1.0, 0.0}), DomainError);
}

TEST_CASE("projection") {
    const auto t = SurfaceModel::torus();
    const PhasePoint z{0, {0.1, 0.2}, {0.6, 0.8}};
    CHECK(z.base().x[0] == 0.1);
    CHECK(z.base().x[1] == 0.2);
}

TEST_CASE("distance examples") {
    const auto s = SurfaceModel::sphere();
    const ChartPoint north = s.chart_point_from_embedded(Vec3(0, 0, 1));
    const ChartPoint south = s.chart_point_from_embedded(Vec3(0, 0, -1));
    CHECK(s.distance(north, south) == doctest::Approx(kPi).epsilon(1e-14));
    CHECK(s.distance({0, {kPi / 2, 0.0}}, {0, {kPi / 2, kPi / 2}}) == doctest::Approx(kPi / 2).epsilon(1e-14));

    const auto t = SurfaceModel::torus();
    CHECK(t.distance({0, {0.0, 0.0}}, {0, {kTwoPi - 0.1, 0.0}}) == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("sphere distance equals arccos of embedded dot product") {
    const auto s = SurfaceModel::sphere();
    for (int i = 0; i < 20; ++i) {
        const ChartPoint a{0, {0.1 + 0.14 * i, 0.37 * i}};
        const ChartPoint b{1, {2.9 - 0.13 * i, 0.51 * i + 0.2}};
        const double ref = std::acos(std::clamp(s.embed(a).dot(s.embed(b)), -1.0, 1.0));
        CHECK(std::abs(s.distance(a, b) - ref) < 1e-7);  // acos is ill-conditioned near 0 and pi
        CHECK(s.distance(a, a) == 0.0);
        CHECK(s.distance(a, b) == doctest::Approx(s.distance(b, a)).epsilon(1e-14));
    }
}

TEST_CASE("triangle inequality on samples") {
    for (const auto& m : {SurfaceModel::sphere(), SurfaceModel::torus()}) {
        for (int i = 0; i < 30; ++i) {
            const ChartPoint a = m.from_canonical({std::fmod(0.31 * i, 1.0) * 2 - 1 + (m.kind() == SurfaceKind::Torus ? 1.0 : 0.0), 0.77 * i});
            const ChartPoint b = m.from_canonical({std::fmod(0.53 * i + 0.1, 1.0) * 1.8 - 0.9 + (m.kind() == SurfaceKind::Torus ? 1.0 : 0.0), 1.3 * i + 0.4});
            const ChartPoint c = m.from_canonical({std::fmod(0.71 * i + 0.2, 1.0) * 1.8 - 0.9 + (m.kind() == SurfaceKind::Torus ? 1.0 : 0.0), 2.1 * i + 1.0});
            CHECK(m.distance(a, c) <= m.distance(a, b) + m.distance(b, c) + 1e-9);
        }
    }
}

TEST_CASE("total area by quadrature") {
    const auto s = SurfaceModel::sphere();
    const auto t = SurfaceModel::torus();
    CHECK(s.integrate([](const ChartPoint&) { return 1.0; }) == doctest::Approx(4 * kPi).epsilon(1e-10));
    CHECK(t.integrate([](const ChartPoint&) { return 1.0; }) == doctest::Approx(4 * kPi * kPi).epsilon(1e-10));
    CHECK(s.total_area() == doctest::Approx(4 * kPi));
    const auto z = SurfaceModel::zoll_revolution_demo();
    CHECK(z.integrate([](const ChartPoint&) { return 1.0; }) == doctest::Approx(z.total_area()).epsilon(1e-8));
}

TEST_CASE("periodicity flags") {
    CHECK(SurfaceModel::sphere().all_geodesics_periodic());
    CHECK(*SurfaceModel::sphere().common_period() == doctest::Approx(kTwoPi));
    CHECK_FALSE(SurfaceModel::torus().all_geodesics_periodic());
    CHECK(SurfaceModel::zoll_revolution_demo().all_geodesics_periodic());
}

TEST_CASE("model lookup") {
    CHECK(SurfaceModel::from_name("sphere").kind() == SurfaceKind::Sphere);
    CHECK(SurfaceModel::from_name("torus").kind() == SurfaceKind::Torus);
    CHECK(SurfaceModel::from_name("zoll_revolution_demo").kind() == SurfaceKind::Revolution);
    CHECK_THROWS_AS(SurfaceModel::from_name("klein"), ParseError);
}

TEST_CASE("phase points are normalized") {
    const auto s = SurfaceModel::sphere();
    const auto z = s.make_phase_point(0, {1.0, 2.0}, {3.0, 5.0});
    CHECK(s.cometric(z) == doctest::Approx(1.0).epsilon(1e-12));
    const auto zr = SurfaceModel::zoll_revolution_demo().make_phase_point(0, {1.0, 2.0}, {0.2, 0.5});
    CHECK(SurfaceModel::zoll_revolution_demo().cometric(zr) == doctest::Approx(1.0).epsilon(1e-12));
}
