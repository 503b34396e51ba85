#include "zoll/surface.hpp"

#include <algorithm>
#include <cmath>

#include "zoll/errors.hpp"
#include "zoll/quadrature.hpp"

namespace zoll {

std::string_view to_string(SurfaceKind kind) {
    switch (kind) {
        case SurfaceKind::Sphere: return "sphere";
        case SurfaceKind::Torus: return "torus";
        case SurfaceKind::Revolution: return "revolution";
    }
    return "unknown";
}

double wrap_angle(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
}

double wrap_difference(double a) {
    double r = std::remainder(a, kTwoPi);
    if (r <= -kPi) r += kTwoPi;
    return r;
}

struct SurfaceModel::Impl {
    SurfaceKind kind;
    std::string name;
    double area = 0.0;
    std::optional<RevolutionProfile> profile;
    bool zoll = false;
};

namespace {

// Sphere chart c maps standard polar coordinates q(theta, phi) through a fixed rotation.
// Chart 1 sends the z axis of q to the x axis of R^3.
Vec3 rotate_out(int chart, const Vec3& q) {
    if (chart == 0) return q;
    return {q.z(), q.x(), q.y()};
}

Vec3 rotate_in(int chart, const Vec3& p) {
    if (chart == 0) return p;
    return {p.y(), p.z(), p.x()};
}

struct SphereFrame {
    Vec3 p;
    Vec3 e_theta;  // unit
    Vec3 e_phi;    // length sin(theta)
    double sin_theta;
};

SphereFrame sphere_frame(const ChartPoint& x) {
    const double th = x.x[0];
    const double ph = x.x[1];
    const double st = std::sin(th), ct = std::cos(th), sp = std::sin(ph), cp = std::cos(ph);
    SphereFrame f;
    f.p = rotate_out(x.chart, Vec3(st * cp, st * sp, ct));
    f.e_theta = rotate_out(x.chart, Vec3(ct * cp, ct * sp, -st));
    f.e_phi = rotate_out(x.chart, Vec3(-st * sp, st * cp, 0.0));
    f.sin_theta = st;
    return f;
}

void require_sphere(const SurfaceModel& m, const char* what) {
    if (m.kind() != SurfaceKind::Sphere) {
        throw UnsupportedError(std::string(what) + " is only defined for the sphere model");
    }
}

}  // namespace

SurfaceModel SurfaceModel::sphere() {
    auto impl = std::make_shared<Impl>();
    impl->kind = SurfaceKind::Sphere;
    impl->name = "sphere";
    impl->area = 4.0 * kPi;
    impl->zoll = true;
    return SurfaceModel(std::move(impl));
}

SurfaceModel SurfaceModel::torus() {
    auto impl = std::make_shared<Impl>();
    impl->kind = SurfaceKind::Torus;
    impl->name = "torus";
    impl->area = kTwoPi * kTwoPi;
    return SurfaceModel(std::move(impl));
}

SurfaceModel SurfaceModel::revolution(RevolutionProfile profile) {
    if (!profile.f || !profile.df || !(profile.length > 0.0)) {
        throw PreconditionError("revolution profile needs f, df and a positive length");
    }
    auto impl = std::make_shared<Impl>();
    impl->kind = SurfaceKind::Revolution;
    impl->name = profile.name;
    const auto& f = profile.f;
    impl->area = kTwoPi * quad::integrate([&](double r) { return f(r); }, 0.0, profile.length);
    impl->profile = std::move(profile);
    return SurfaceModel(std::move(impl));
}

SurfaceModel SurfaceModel::round_revolution() {
    RevolutionProfile p;
    p.name = "round_revolution";
    p.length = kPi;
    p.f = [](double r) { return std::sin(r); };
    p.df = [](double r) { return std::cos(r); };
    SurfaceModel m = revolution(std::move(p));
    auto impl = std::make_shared<Impl>(*m.impl_);
    impl->zoll = true;
    return SurfaceModel(std::move(impl));
}

SurfaceModel SurfaceModel::zoll_revolution_demo(double amplitude) {
    if (std::abs(amplitude) >= 2.0) throw PreconditionError("zoll demo amplitude must satisfy |a| < 2");
    // Arc length along the meridian: r(s) = s + (a/3) sin^3 s, so r(pi) = pi.
    const double a = amplitude;
    auto s_of_r = [a](double r) {
        double s = r;
        for (int it = 0; it < 60; ++it) {
            const double ss = std::sin(s);
            const double g = s + a / 3.0 * ss * ss * ss - r;
            const double dg = 1.0 + a * std::cos(s) * ss * ss;
            const double step = g / dg;
            s -= step;
            if (std::abs(step) < 1e-16) break;
        }
        return s;
    };
    RevolutionProfile p;
    p.name = "zoll_revolution_demo";
    p.length = kPi;
    p.f = [s_of_r](double r) { return std::sin(s_of_r(r)); };
    p.df = [s_of_r, a](double r) {
        const double s = s_of_r(r);
        const double ss = std::sin(s);
        return std::cos(s) / (1.0 + a * std::cos(s) * ss * ss);
    };
    SurfaceModel m = revolution(std::move(p));
    auto impl = std::make_shared<Impl>(*m.impl_);
    impl->zoll = true;
    return SurfaceModel(std::move(impl));
}

SurfaceModel SurfaceModel::from_name(std::string_view name) {
    if (name == "sphere") return sphere();
    if (name == "torus") return torus();
    if (name == "zoll_revolution_demo") return zoll_revolution_demo();
    if (name == "round_revolution") return round_revolution();
    throw ParseError("unknown model '" + std::string(name) + "'", "model.kind");
}

SurfaceKind SurfaceModel::kind() const { return impl_->kind; }
const std::string& SurfaceModel::name() const { return impl_->name; }
double SurfaceModel::total_area() const { return impl_->area; }
int SurfaceModel::chart_count() const { return kind() == SurfaceKind::Sphere ? 2 : 1; }
const RevolutionProfile* SurfaceModel::profile() const {
    return impl_->profile ? &*impl_->profile : nullptr;
}

bool SurfaceModel::all_geodesics_periodic() const { return impl_->zoll; }

std::optional<double> SurfaceModel::common_period() const {
    if (impl_->zoll) return kTwoPi;
    return std::nullopt;
}

bool SurfaceModel::in_chart(const ChartPoint& x) const {
    if (x.chart < 0 || x.chart >= chart_count()) return false;
    if (!std::isfinite(x.x[0]) || !std::isfinite(x.x[1])) return false;
    switch (kind()) {
        case SurfaceKind::Sphere: return x.x[0] > 0.0 && x.x[0] < kPi && std::sin(x.x[0]) > 0.0;
        case SurfaceKind::Torus: return true;
        case SurfaceKind::Revolution:
            return x.x[0] > 0.0 && x.x[0] < impl_->profile->length && impl_->profile->f(x.x[0]) > 0.0;
    }
    return false;
}

double SurfaceModel::cometric(const ChartPoint& x, Vec2 xi) const {
    if (!in_chart(x)) throw DomainError("chart point outside chart domain");
    switch (kind()) {
        case SurfaceKind::Sphere: {
            const double s = std::sin(x.x[0]);
            return xi[0] * xi[0] + xi[1] * xi[1] / (s * s);
        }
        case SurfaceKind::Torus: return xi[0] * xi[0] + xi[1] * xi[1];
        case SurfaceKind::Revolution: {
            const double f = impl_->profile->f(x.x[0]);
            return xi[0] * xi[0] + xi[1] * xi[1] / (f * f);
        }
    }
    return 0.0;
}

PhasePoint SurfaceModel::make_phase_point(int chart, Vec2 x, Vec2 xi) const {
    const double n2 = cometric(ChartPoint{chart, x}, xi);
    if (!(n2 > 0.0)) throw DomainError("covector must be nonzero");
    const double s = 1.0 / std::sqrt(n2);
    return normalize(PhasePoint{chart, x, {xi[0] * s, xi[1] * s}});
}

PhasePoint SurfaceModel::phase_point_from_angle(const ChartPoint& x, double angle) const {
    if (!in_chart(x)) throw DomainError("chart point outside chart domain");
    const double c = std::cos(angle), s = std::sin(angle);
    switch (kind()) {
        case SurfaceKind::Sphere:
            return normalize(PhasePoint{x.chart, x.x, {c, s * std::sin(x.x[0])}});
        case SurfaceKind::Torus: return normalize(PhasePoint{x.chart, x.x, {c, s}});
        case SurfaceKind::Revolution:
            return normalize(PhasePoint{x.chart, x.x, {c, s * impl_->profile->f(x.x[0])}});
    }
    return {};
}

double SurfaceModel::direction_angle(const PhasePoint& z) const {
    switch (kind()) {
        case SurfaceKind::Sphere: return std::atan2(z.xi[1] / std::sin(z.x[0]), z.xi[0]);
        case SurfaceKind::Torus: return std::atan2(z.xi[1], z.xi[0]);
        case SurfaceKind::Revolution:
            return std::atan2(z.xi[1] / impl_->profile->f(z.x[0]), z.xi[0]);
    }
    return 0.0;
}

double SurfaceModel::distance(const ChartPoint& a, const ChartPoint& b) const {
    switch (kind()) {
        case SurfaceKind::Sphere: {
            const Vec3 p = embed(a), q = embed(b);
            return std::atan2(p.cross(q).norm(), p.dot(q));
        }
        case SurfaceKind::Torus: {
            const double d0 = wrap_difference(a.x[0] - b.x[0]);
            const double d1 = wrap_difference(a.x[1] - b.x[1]);
            return std::hypot(d0, d1);
        }
        case SurfaceKind::Revolution: {
            if (wrap_difference(a.x[1] - b.x[1]) == 0.0) return std::abs(a.x[0] - b.x[0]);
            throw UnsupportedError("distance on a surface of revolution is only available along meridians");
        }
    }
    return 0.0;
}

double SurfaceModel::phase_distance(const PhasePoint& a, const PhasePoint& b) const {
    switch (kind()) {
        case SurfaceKind::Sphere: {
            const auto [p, v] = embed_phase(a);
            const auto [q, w] = embed_phase(b);
            return (p - q).norm() + (v - w).norm();
        }
        case SurfaceKind::Torus:
            return std::hypot(wrap_difference(a.x[0] - b.x[0]), wrap_difference(a.x[1] - b.x[1])) +
                   std::hypot(a.xi[0] - b.xi[0], a.xi[1] - b.xi[1]);
        case SurfaceKind::Revolution:
            return std::hypot(a.x[0] - b.x[0], wrap_difference(a.x[1] - b.x[1])) +
                   std::hypot(a.xi[0] - b.xi[0], a.xi[1] - b.xi[1]);
    }
    return 0.0;
}

double SurfaceModel::integrate(const std::function<double(const ChartPoint&)>& f, int resolution) const {
    const auto [lo, hi] = canonical_domain();
    const int nu = std::max(4, resolution);
    const int nv = std::max(8, 2 * resolution);
    const quad::Rule ru = quad::gauss_legendre(nu, lo[0], hi[0]);
    const bool periodic_u = kind() == SurfaceKind::Torus;
    double sum = 0.0;
    const double hv = (hi[1] - lo[1]) / nv;
    for (int i = 0; i < nu; ++i) {
        const double u = periodic_u ? lo[0] + (i + 0.5) * (hi[0] - lo[0]) / nu : ru.nodes[i];
        const double wu = periodic_u ? (hi[0] - lo[0]) / nu : ru.weights[i];
        for (int j = 0; j < nv; ++j) {
            const Vec2 uv{u, lo[1] + (j + 0.5) * hv};
            sum += wu * hv * area_density(uv) * f(from_canonical(uv));
        }
    }
    return sum;
}

Vec2 SurfaceModel::canonical(const ChartPoint& x) const {
    switch (kind()) {
        case SurfaceKind::Sphere: {
            const Vec3 p = embed(x);
            return {std::clamp(p.z(), -1.0, 1.0), wrap_angle(std::atan2(p.y(), p.x()))};
        }
        case SurfaceKind::Torus: return {wrap_angle(x.x[0]), wrap_angle(x.x[1])};
        case SurfaceKind::Revolution: return {x.x[0], wrap_angle(x.x[1])};
    }
    return {};
}

ChartPoint SurfaceModel::from_canonical(Vec2 uv) const {
    switch (kind()) {
        case SurfaceKind::Sphere: {
            const double z = std::clamp(uv[0], -1.0, 1.0);
            const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
            const Vec3 p(s * std::cos(uv[1]), s * std::sin(uv[1]), z);
            return chart_point_from_embedded(p, 0);
        }
        case SurfaceKind::Torus: return {0, {uv[0], uv[1]}};
        case SurfaceKind::Revolution: return {0, {uv[0], uv[1]}};
    }
    return {};
}

double SurfaceModel::area_density(Vec2 uv) const {
    if (kind() == SurfaceKind::Revolution) return impl_->profile->f(uv[0]);
    return 1.0;
}

std::pair<Vec2, Vec2> SurfaceModel::canonical_domain() const {
    switch (kind()) {
        case SurfaceKind::Sphere: return {{-1.0, 0.0}, {1.0, kTwoPi}};
        case SurfaceKind::Torus: return {{0.0, 0.0}, {kTwoPi, kTwoPi}};
        case SurfaceKind::Revolution: return {{0.0, 0.0}, {impl_->profile->length, kTwoPi}};
    }
    return {};
}

PhasePoint SurfaceModel::perturb(const PhasePoint& z, std::span<const double, 3> d) const {
    if (d[0] == 0.0 && d[1] == 0.0 && d[2] == 0.0) return z;
    switch (kind()) {
        case SurfaceKind::Sphere: {
            const auto [p, v] = embed_phase(z);
            const Vec3 n = p.cross(v);
            const Vec3 omega = d[0] * n + d[1] * v + d[2] * p;
            const double angle = omega.norm();
            const Eigen::AngleAxisd rot(angle, omega / angle);
            const Vec3 p2 = (rot * p).normalized();
            Vec3 v2 = rot * v;
            v2 = (v2 - v2.dot(p2) * p2).normalized();
            return phase_from_embedded(p2, v2, z.chart);
        }
        case SurfaceKind::Torus: {
            const double ang = direction_angle(z) + d[2];
            return normalize(PhasePoint{0, {z.x[0] + d[0], z.x[1] + d[1]}, {std::cos(ang), std::sin(ang)}});
        }
        case SurfaceKind::Revolution: {
            const double len = impl_->profile->length;
            const double r = std::clamp(z.x[0] + d[0], 1e-3 * len, (1.0 - 1e-3) * len);
            const double ang = direction_angle(z) + d[2];
            return phase_point_from_angle(ChartPoint{0, {r, z.x[1] + d[1]}}, ang);
        }
    }
    return z;
}

PhasePoint SurfaceModel::normalize(const PhasePoint& z) const {
    switch (kind()) {
        case SurfaceKind::Sphere: {
            if (std::sin(z.x[0]) >= 0.5 && z.x[0] > 0.0 && z.x[0] < kPi) {
                return PhasePoint{z.chart, {z.x[0], wrap_angle(z.x[1])}, z.xi};
            }
            const auto [p, v] = embed_phase(z);
            return phase_from_embedded(p, v, z.chart);
        }
        case SurfaceKind::Torus:
            return PhasePoint{0, {wrap_angle(z.x[0]), wrap_angle(z.x[1])}, z.xi};
        case SurfaceKind::Revolution:
            return PhasePoint{0, {z.x[0], wrap_angle(z.x[1])}, z.xi};
    }
    return z;
}

Vec3 SurfaceModel::embed(const ChartPoint& x) const {
    require_sphere(*this, "embed");
    const double th = x.x[0], ph = x.x[1];
    const double st = std::sin(th);
    return rotate_out(x.chart, Vec3(st * std::cos(ph), st * std::sin(ph), std::cos(th)));
}

ChartPoint SurfaceModel::chart_point_from_embedded(const Vec3& p, int preferred_chart) const {
    require_sphere(*this, "chart_point_from_embedded");
    auto coords = [&](int chart) {
        const Vec3 q = rotate_in(chart, p);
        const double th = std::atan2(std::hypot(q.x(), q.y()), q.z());
        return ChartPoint{chart, {th, wrap_angle(std::atan2(q.y(), q.x()))}};
    };
    ChartPoint pref = coords(preferred_chart == 1 ? 1 : 0);
    if (std::sin(pref.x[0]) >= 0.5) return pref;
    ChartPoint other = coords(preferred_chart == 1 ? 0 : 1);
    return std::sin(other.x[0]) > std::sin(pref.x[0]) ? other : pref;
}

std::pair<Vec3, Vec3> SurfaceModel::embed_phase(const PhasePoint& z) const {
    require_sphere(*this, "embed_phase");
    const SphereFrame f = sphere_frame(z.base());
    const double s2 = f.sin_theta * f.sin_theta;
    Vec3 v = z.xi[0] * f.e_theta + (z.xi[1] / s2) * f.e_phi;
    return {f.p, v};
}

PhasePoint SurfaceModel::phase_from_embedded(const Vec3& p, const Vec3& v, int preferred_chart) const {
    const ChartPoint x = chart_point_from_embedded(p, preferred_chart);
    const SphereFrame f = sphere_frame(x);
    return PhasePoint{x.chart, x.x, {v.dot(f.e_theta), v.dot(f.e_phi)}};
}

double SurfaceModel::latitude(const ChartPoint& x) const {
    // Chart 0 reads latitude off the colatitude directly so the equator stays exactly at 0.
    if (x.chart == 0) {
        require_sphere(*this, "latitude");
        return 0.5 * kPi - x.x[0];
    }
    const Vec3 p = embed(x);
    return std::asin(std::clamp(p.z(), -1.0, 1.0));
}

}  // namespace zoll
