#pragma once

#include <optional>
#include <vector>

#include "zoll/region.hpp"
#include "zoll/surface.hpp"

namespace zoll {

struct FlowSettings {
    double step = 0.005;           // integrator step for revolution surfaces
    int nodes_per_unit_time = 64;  // Birkhoff sampling density
    double period_tol = 1e-8;
    double horizon_cap = 1e6;
};

class Orbit;

/// The geodesic flow on S*M. Sphere and torus orbits are closed form; surfaces of revolution
/// use a fourth-order splitting of H = (p_r^2 + p_theta^2 / f(r)^2) / 2 that keeps p_theta
/// (the Clairaut integral) exact and renormalizes p_r after every step.
class GeodesicFlow {
public:
    explicit GeodesicFlow(SurfaceModel model, FlowSettings settings = {});

    const SurfaceModel& model() const { return model_; }
    const FlowSettings& settings() const { return settings_; }
    bool closed_form() const { return model_.kind() != SurfaceKind::Revolution; }

    /// phi_t(z). Throws IntegrationError if the energy drifts, PreconditionError past the cap.
    PhasePoint flow(const PhasePoint& z, double t) const;

    /// Orbit handle with cached integration, for repeated evaluation along one trajectory.
    Orbit orbit(const PhasePoint& z) const;

private:
    SurfaceModel model_;
    FlowSettings settings_;
};

/// One trajectory t -> phi_t(z). Not thread-safe: evaluation extends an internal cache.
class Orbit {
public:
    Orbit(const GeodesicFlow& flow, const PhasePoint& z);

    PhasePoint at(double t) const;
    const PhasePoint& start() const { return z_; }
    const GeodesicFlow& flow() const { return flow_; }

private:
    PhasePoint integrate_from(const PhasePoint& z, double t) const;

    GeodesicFlow flow_;
    PhasePoint z_;
    // Sphere: embedded position and velocity.
    Vec3 p_ = Vec3::Zero();
    Vec3 v_ = Vec3::Zero();
    mutable std::vector<PhasePoint> forward_;
    mutable std::vector<PhasePoint> backward_;
};

/// One fixed step of the revolution integrator (exposed for tests).
PhasePoint revolution_step(const RevolutionProfile& profile, const PhasePoint& z, double h);

enum class BirkhoffRule {
    Auto,       // piecewise for observables with pieces, Gauss for smooth ones
    Midpoint,   // composite midpoint, nodes_per_unit_time samples
    Gauss,      // composite Gauss-Legendre on unit panels
    Piecewise,  // locate piece transitions by bisection, Gauss on each piece
};

struct BirkhoffOptions {
    BirkhoffRule rule = BirkhoffRule::Auto;
    int nodes_per_unit_time = 64;
    int gauss_nodes = 8;
};

/// a_T(z) = (1/T) int_0^T a(phi_t z) dt.
double birkhoff_average(const GeodesicFlow& flow, const Observable& a, const PhasePoint& z, double T,
                        const BirkhoffOptions& options = {});

/// Averages at every horizon of an increasing list, in one pass along the orbit.
std::vector<double> birkhoff_averages(const GeodesicFlow& flow, const Observable& a, const PhasePoint& z,
                                      const std::vector<double>& horizons, const BirkhoffOptions& options = {});

/// int_{t0}^{t1} a(orbit(t)) dt.
double orbit_integral(const Orbit& orbit, const Observable& a, double t0, double t1,
                      const BirkhoffOptions& options = {});

struct PeriodicOrbit {
    PhasePoint start;
    double period = 0.0;
    double residual = 0.0;
};

/// Smallest T <= T_max with phase_distance(phi_T z, z) <= tol, polished by golden-section search
/// on the closure defect around each sampled local minimum.
std::optional<PeriodicOrbit> detect_period(const GeodesicFlow& flow, const PhasePoint& z, double T_max,
                                           double tol = 1e-8);

}  // namespace zoll
