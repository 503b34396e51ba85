#pragma once

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>

namespace zoll {

using Vec2 = std::array<double, 2>;
using Vec3 = Eigen::Vector3d;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

enum class SurfaceKind { Sphere, Torus, Revolution };

std::string_view to_string(SurfaceKind kind);

/// A point of M in chart coordinates.
struct ChartPoint {
    int chart = 0;
    Vec2 x{};
};

/// A point of the unit cotangent bundle S*M: base coordinates x and covector xi in one chart.
struct PhasePoint {
    int chart = 0;
    Vec2 x{};
    Vec2 xi{};

    ChartPoint base() const { return {chart, x}; }
};

/// Meridian profile of a surface of revolution with metric dr^2 + f(r)^2 dtheta^2, r in (0, length).
struct RevolutionProfile {
    std::string name;
    double length = kPi;
    std::function<double(double)> f;
    std::function<double(double)> df;
};

/// Closed-form model surface. Immutable; copies share state.
///
/// Charts:
///  - sphere: chart 0 is (colatitude, longitude) about the z axis, chart 1 the same about the x
///    axis, so together they cover S^2; unit radius.
///  - torus: one periodic chart on [0, 2pi)^2 with the flat metric.
///  - revolution: one (r, theta) chart, poles excluded.
///
/// Canonical quadrature coordinates (u, v): sphere (z = cos colatitude, longitude) with area
/// element du dv; torus (x1, x2); revolution (r, theta) with area element f(r) du dv.
class SurfaceModel {
public:
    static SurfaceModel sphere();
    static SurfaceModel torus();
    static SurfaceModel revolution(RevolutionProfile profile);
    /// Round sphere written as a surface of revolution, f(r) = sin r.
    static SurfaceModel round_revolution();
    /// Non-round Zoll surface of revolution: metric (1 + a cos s sin^2 s)^2 ds^2 + sin^2 s dtheta^2
    /// re-parametrized by arc length along meridians. All geodesics close with length 2pi.
    static SurfaceModel zoll_revolution_demo(double amplitude = 0.6);
    /// Built-in lookup: "sphere", "torus", "zoll_revolution_demo", "round_revolution".
    static SurfaceModel from_name(std::string_view name);

    SurfaceKind kind() const;
    const std::string& name() const;
    double total_area() const;
    int chart_count() const;
    const RevolutionProfile* profile() const;

    bool all_geodesics_periodic() const;
    std::optional<double> common_period() const;

    bool in_chart(const ChartPoint& x) const;
    /// g*_x(xi, xi). Throws DomainError outside the chart.
    double cometric(const ChartPoint& x, Vec2 xi) const;
    double cometric(const PhasePoint& z) const { return cometric(z.base(), z.xi); }

    /// Phase point with xi rescaled to unit cometric length.
    PhasePoint make_phase_point(int chart, Vec2 x, Vec2 xi) const;
    /// Unit covector at x making angle `angle` with the first vector of the chart's orthonormal frame.
    PhasePoint phase_point_from_angle(const ChartPoint& x, double angle) const;
    /// Angle of the unit covector of z in the chart's orthonormal frame.
    double direction_angle(const PhasePoint& z) const;

    /// Geodesic distance. Exact for sphere and torus; revolution surfaces are unsupported.
    double distance(const ChartPoint& a, const ChartPoint& b) const;
    /// Chart-independent distance between phase points (used for closure defects and orbit matching).
    double phase_distance(const PhasePoint& a, const PhasePoint& b) const;

    /// Area integral of f by a tensor rule with `resolution` nodes per axis unit.
    double integrate(const std::function<double(const ChartPoint&)>& f, int resolution = 64) const;

    Vec2 canonical(const ChartPoint& x) const;
    ChartPoint from_canonical(Vec2 uv) const;
    double area_density(Vec2 uv) const;
    std::pair<Vec2, Vec2> canonical_domain() const;

    /// Move z by a small displacement in local phase-space coordinates: two base directions and
    /// one rotation of the covector. d = 0 returns z.
    PhasePoint perturb(const PhasePoint& z, std::span<const double, 3> d) const;

    /// Wrap the base coordinates of a torus or revolution point into the fundamental domain and
    /// pick a well-conditioned sphere chart.
    PhasePoint normalize(const PhasePoint& z) const;

    // Sphere embedding helpers (throw UnsupportedError for other kinds).
    Vec3 embed(const ChartPoint& x) const;
    ChartPoint chart_point_from_embedded(const Vec3& p, int preferred_chart = 0) const;
    std::pair<Vec3, Vec3> embed_phase(const PhasePoint& z) const;
    PhasePoint phase_from_embedded(const Vec3& p, const Vec3& v, int preferred_chart = 0) const;
    /// Latitude of a sphere point in radians.
    double latitude(const ChartPoint& x) const;

    struct Impl;

private:
    explicit SurfaceModel(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

/// Wrap an angle into [0, 2pi).
double wrap_angle(double a);
/// Wrap an angle difference into (-pi, pi].
double wrap_difference(double a);

}  // namespace zoll
