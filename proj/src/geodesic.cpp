#include "zoll/geodesic.hpp"

#include <algorithm>
#include <cmath>

#include "zoll/errors.hpp"
#include "zoll/optimize.hpp"
#include "zoll/quadrature.hpp"

namespace zoll {

namespace {

// Yoshida's triple-jump coefficients turning the symmetric leapfrog into a fourth-order scheme.
const double kW1 = 1.0 / (2.0 - std::cbrt(2.0));
const double kW0 = -std::cbrt(2.0) * kW1;

struct RevState {
    double r, th, pr, pth;
};

void reflect_at_poles(RevState& s, double length) {
    if (s.r < 0.0) {
        s.r = -s.r;
        s.th += kPi;
        s.pr = -s.pr;
    } else if (s.r > length) {
        s.r = 2.0 * length - s.r;
        s.th += kPi;
        s.pr = -s.pr;
    }
}

void leapfrog(const RevolutionProfile& prof, RevState& s, double h) {
    s.r += 0.5 * h * s.pr;
    reflect_at_poles(s, prof.length);
    const double f = prof.f(s.r);
    if (!(f > 0.0)) throw IntegrationError("revolution flow reached a pole", 0.0);
    const double f2 = f * f;
    s.pr += h * s.pth * s.pth * prof.df(s.r) / (f2 * f);
    s.th += h * s.pth / f2;
    s.r += 0.5 * h * s.pr;
    reflect_at_poles(s, prof.length);
}

}  // namespace

PhasePoint revolution_step(const RevolutionProfile& prof, const PhasePoint& z, double h) {
    RevState s{z.x[0], z.x[1], z.xi[0], z.xi[1]};
    // Near the poles the angular kick is stiff; split the step there.
    const double f0 = prof.f(s.r);
    const int m = std::clamp(static_cast<int>(std::ceil(std::abs(h) / (0.25 * std::max(f0, 1e-12)))), 1, 4096);
    const double hs = h / m;
    for (int i = 0; i < m; ++i) {
        leapfrog(prof, s, kW1 * hs);
        leapfrog(prof, s, kW0 * hs);
        leapfrog(prof, s, kW1 * hs);
    }
    const double f = prof.f(s.r);
    if (!(f > 0.0) || !std::isfinite(s.pr)) throw IntegrationError("revolution flow left the chart", 0.0);
    const double q = 1.0 - s.pth * s.pth / (f * f);
    const double energy = s.pr * s.pr + s.pth * s.pth / (f * f);
    if (std::abs(energy - 1.0) > 1e-3) throw IntegrationError("energy drift above 1e-3", 0.0);
    if (std::abs(s.pr) > 1e-3 && q > 0.0) s.pr = std::copysign(std::sqrt(q), s.pr);
    return PhasePoint{0, {s.r, wrap_angle(s.th)}, {s.pr, s.pth}};
}

GeodesicFlow::GeodesicFlow(SurfaceModel model, FlowSettings settings)
    : model_(std::move(model)), settings_(settings) {
    if (!(settings_.step > 0.0)) throw PreconditionError("flow step must be positive");
}

PhasePoint GeodesicFlow::flow(const PhasePoint& z, double t) const {
    if (t == 0.0) return z;
    return Orbit(*this, z).at(t);
}

Orbit GeodesicFlow::orbit(const PhasePoint& z) const { return Orbit(*this, z); }

Orbit::Orbit(const GeodesicFlow& flow, const PhasePoint& z) : flow_(flow), z_(z) {
    const SurfaceModel& m = flow_.model();
    if (!m.in_chart(z.base())) throw DomainError("orbit start outside the chart");
    if (m.kind() == SurfaceKind::Sphere) {
        const auto pv = m.embed_phase(z);
        p_ = pv.first;
        v_ = pv.second.normalized();
    } else if (m.kind() == SurfaceKind::Revolution) {
        forward_.push_back(z);
        backward_.push_back(z);
    }
}

PhasePoint Orbit::integrate_from(const PhasePoint& z, double t) const {
    return revolution_step(*flow_.model().profile(), z, t);
}

PhasePoint Orbit::at(double t) const {
    if (t == 0.0) return z_;
    const SurfaceModel& m = flow_.model();
    if (std::abs(t) > flow_.settings().horizon_cap) {
        throw PreconditionError("flow time beyond the configured horizon cap");
    }
    switch (m.kind()) {
        case SurfaceKind::Sphere: {
            const double c = std::cos(t), s = std::sin(t);
            return m.phase_from_embedded(p_ * c + v_ * s, v_ * c - p_ * s, z_.chart);
        }
        case SurfaceKind::Torus:
            return PhasePoint{0, {wrap_angle(z_.x[0] + t * z_.xi[0]), wrap_angle(z_.x[1] + t * z_.xi[1])}, z_.xi};
        case SurfaceKind::Revolution: break;
    }
    const double h = flow_.settings().step;
    auto& cache = t > 0.0 ? forward_ : backward_;
    const double sign = t > 0.0 ? 1.0 : -1.0;
    const double a = std::abs(t);
    const auto k = static_cast<std::size_t>(std::floor(a / h));
    while (cache.size() <= k) {
        try {
            cache.push_back(integrate_from(cache.back(), sign * h));
        } catch (const IntegrationError&) {
            throw IntegrationError("revolution flow failed", sign * h * static_cast<double>(cache.size() - 1));
        }
    }
    const double rest = a - static_cast<double>(k) * h;
    if (rest == 0.0) return cache[k];
    try {
        return integrate_from(cache[k], sign * rest);
    } catch (const IntegrationError&) {
        throw IntegrationError("revolution flow failed", sign * h * static_cast<double>(k));
    }
}

// ---------------------------------------------------------------------------------------------
// Birkhoff averages

namespace {

BirkhoffRule resolve(const Observable& a, BirkhoffRule rule) {
    if (rule != BirkhoffRule::Auto) return rule;
    if (a.has_pieces()) return BirkhoffRule::Piecewise;
    return BirkhoffRule::Gauss;
}

double gauss_segment(const Orbit& orbit, const Observable& a, double t0, double t1, int n) {
    if (t1 <= t0) return 0.0;
    const double bp[2] = {t0, t1};
    const quad::Rule rule = quad::composite_gauss(bp, n, 1.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) sum += rule.weights[i] * a(orbit.at(rule.nodes[i]));
    return sum;
}

void find_transitions(const Orbit& orbit, const Observable& a, double lo, int llo, double hi, int lhi,
                      std::vector<double>& out) {
    if (llo == lhi) return;
    if (hi - lo <= 1e-13 * std::max(1.0, std::abs(hi))) {
        out.push_back(0.5 * (lo + hi));
        return;
    }
    const double mid = 0.5 * (lo + hi);
    const int lm = a.piece(orbit.at(mid).base());
    find_transitions(orbit, a, lo, llo, mid, lm, out);
    find_transitions(orbit, a, mid, lm, hi, lhi, out);
}

}  // namespace

double orbit_integral(const Orbit& orbit, const Observable& a, double t0, double t1, const BirkhoffOptions& opt) {
    if (t1 < t0) throw PreconditionError("orbit_integral needs t0 <= t1");
    const double len = t1 - t0;
    if (len == 0.0) return 0.0;
    if (a.kind() == ObservableKind::Constant) return a.lower() * len;
    const int n = std::max(1, static_cast<int>(std::ceil(len * opt.nodes_per_unit_time - 1e-9)));
    const double dt = len / n;
    switch (resolve(a, opt.rule)) {
        case BirkhoffRule::Midpoint: {
            double sum = 0.0;
            for (int i = 0; i < n; ++i) sum += a(orbit.at(t0 + (i + 0.5) * dt));
            return sum * dt;
        }
        case BirkhoffRule::Gauss: return gauss_segment(orbit, a, t0, t1, opt.gauss_nodes);
        case BirkhoffRule::Piecewise: {
            if (!a.has_pieces()) return gauss_segment(orbit, a, t0, t1, opt.gauss_nodes);
            std::vector<double> cuts;
            double prev_t = t0;
            int prev_l = a.piece(orbit.at(t0).base());
            for (int i = 1; i <= n; ++i) {
                const double t = i == n ? t1 : t0 + i * dt;
                const int l = a.piece(orbit.at(t).base());
                find_transitions(orbit, a, prev_t, prev_l, t, l, cuts);
                prev_t = t;
                prev_l = l;
            }
            std::vector<double> edges{t0};
            edges.insert(edges.end(), cuts.begin(), cuts.end());
            edges.push_back(t1);
            double sum = 0.0;
            for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
                const double u = edges[i], w = edges[i + 1];
                if (w <= u) continue;
                if (a.piecewise_constant()) sum += (w - u) * a(orbit.at(0.5 * (u + w)));
                else sum += gauss_segment(orbit, a, u, w, opt.gauss_nodes);
            }
            return sum;
        }
        case BirkhoffRule::Auto: break;
    }
    return 0.0;
}

namespace {

// Running integral t -> int_0^t a along one orbit. On the round sphere every orbit has period
// 2pi, so long horizons reduce to whole periods plus a remainder.
class CumulativeIntegral {
public:
    CumulativeIntegral(const GeodesicFlow& flow, const Observable& a, const PhasePoint& z,
                       const BirkhoffOptions& options)
        : orbit_(flow.orbit(z)), a_(a), options_(options) {
        if (flow.model().kind() == SurfaceKind::Sphere) period_ = kTwoPi;
    }

    double operator()(double t) {
        if (period_ > 0.0 && t > period_) {
            if (!whole_) whole_ = orbit_integral(orbit_, a_, 0.0, period_, options_);
            const double q = std::floor(t / period_);
            const double rest = t - q * period_;
            return q * *whole_ + orbit_integral(orbit_, a_, 0.0, rest, options_);
        }
        return orbit_integral(orbit_, a_, 0.0, t, options_);
    }

    // int_{t0}^{t1}; avoids recomputing from 0 when no period shortcut applies.
    double between(double t0, double t1) {
        if (period_ > 0.0) return (*this)(t1) - (*this)(t0);
        return orbit_integral(orbit_, a_, t0, t1, options_);
    }

private:
    Orbit orbit_;
    const Observable& a_;
    BirkhoffOptions options_;
    double period_ = 0.0;
    std::optional<double> whole_;
};

}  // namespace

double birkhoff_average(const GeodesicFlow& flow, const Observable& a, const PhasePoint& z, double T,
                        const BirkhoffOptions& options) {
    if (!(T > 0.0)) throw PreconditionError("Birkhoff horizon must be positive");
    CumulativeIntegral integral(flow, a, z, options);
    return integral(T) / T;
}

std::vector<double> birkhoff_averages(const GeodesicFlow& flow, const Observable& a, const PhasePoint& z,
                                      const std::vector<double>& horizons, const BirkhoffOptions& options) {
    std::vector<double> out;
    out.reserve(horizons.size());
    CumulativeIntegral integral(flow, a, z, options);
    double prev = 0.0, acc = 0.0;
    for (double T : horizons) {
        if (!(T > prev)) throw PreconditionError("horizons must be positive and increasing");
        acc += integral.between(prev, T);
        out.push_back(acc / T);
        prev = T;
    }
    return out;
}

// ---------------------------------------------------------------------------------------------
// Periodic orbits

std::optional<PeriodicOrbit> detect_period(const GeodesicFlow& flow, const PhasePoint& z, double T_max,
                                           double tol) {
    if (!(T_max > 0.0)) throw PreconditionError("detect_period needs T_max > 0");
    const Orbit orbit = flow.orbit(z);
    const SurfaceModel& m = flow.model();
    auto defect = [&](double t) { return m.phase_distance(orbit.at(t), z); };
    const double dt = std::min(0.01, T_max / 200.0);
    const int n = static_cast<int>(std::ceil(T_max / dt));
    double d_prev2 = 0.0, d_prev = defect(dt);
    for (int i = 2; i <= n + 1; ++i) {
        const double t = std::min(i * dt, T_max + dt);
        const double d = defect(t);
        // Sample i-1 is a local minimum of the defect.
        if (i >= 3 && d_prev < d_prev2 && d_prev <= d && d_prev < 0.2) {
            const double lo = (i - 2) * dt, hi = t;
            const double ts = opt::golden_section_min(defect, lo, hi, 1e-13);
            const double res = defect(ts);
            if (res <= tol && ts <= T_max) return PeriodicOrbit{z, ts, res};
        }
        d_prev2 = d_prev;
        d_prev = d;
    }
    return std::nullopt;
}

}  // namespace zoll
