#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include "zoll/spectral.hpp"
#include "zoll/surface.hpp"

namespace zoll {

/// u_k(x) = (k/pi)^{n/4} exp(i k (x - x0).xi0 - (k/2)|x - x0|^2) with n = 2, in a flat chart.
/// On the sphere the chart is (longitude, latitude) and the state is multiplied by a tensor cutoff
/// equal to 1 for |x_i - x0_i| <= inner / sqrt(k) and 0 beyond outer / sqrt(k), then renormalized.
struct CoherentState {
    Vec2 x0{};   // chart center; on the sphere (longitude, latitude)
    Vec2 xi0{};  // covector at x0
    double k = 100.0;
    double inner = 6.0;
    double outer = 8.0;

    double inner_radius() const;
    double outer_radius() const;
    /// Chart-local value without cutoff or renormalization.
    std::complex<double> gaussian(Vec2 x) const;
    /// Smooth tensor cutoff in [0, 1].
    double cutoff(Vec2 x) const;
};

/// Symbol a(x, xi) on the flat chart.
using ChartSymbol = std::function<double(Vec2 x, Vec2 xi)>;

struct PairingOptions {
    double step = 0.35;                // trapezoid step in the scaled variables
    double radius = 7.0;               // scaled variables restricted to |(X, Xi)| <= radius
    double chart_radius = 1e300;       // domain of the symbol around x0
};

/// (k^n / (2^{n/2} pi^n)) int int a(x, xi) e^{ik(x-x0).(xi-xi0)} e^{-(k/2)(|x-x0|^2 + |xi-xi0|^2)} dx dxi
/// in x = x0 + X / sqrt(k), xi = xi0 + Xi / sqrt(k), by the trapezoid rule on a ball in (X, Xi).
/// Throws NumericError if the nodes leave the chart window.
std::complex<double> coherent_pairing(const CoherentState& state, const ChartSymbol& a, const PairingOptions& options = {});

/// Sphere point and unit covector of a (longitude, latitude) chart state, as a phase point.
PhasePoint sphere_phase_point(const SurfaceModel& sphere, const CoherentState& state);

/// Tensor Gauss-Legendre grid over the cutoff window of a sphere state, with panels short enough
/// to resolve the phase k xi0; weights include the area element cos(latitude).
struct WindowGrid {
    std::vector<Vec2> points;  // (longitude, latitude)
    std::vector<double> weights;
    std::vector<std::complex<double>> values;  // normalized state at the points
    double norm_before = 0.0;                  // L2 norm of the cut-off state before renormalization
};
WindowGrid window_grid(const CoherentState& state);

/// max_j ||phi_j||_inf / j over the table (1-based j), sampled on a latitude-longitude grid.
double empirical_sobolev_constant(const SpectrumTable& table, int samples = 64);

struct TruncatedState {
    CoherentState source;
    int N = 0;
    std::vector<std::complex<double>> coefficients;  // <u_k, phi_j>, j < N, table order
    double discarded = 0.0;                          // ||pi_N u_k||
    double kept_norm_squared = 1.0;                  // ||y^N||^2 = 1 - discarded^2
    double epsilon = 0.0;
    bool within_bound = true;
    double sobolev_constant = 0.0;
    double required_k = 0.0;  // (2 sqrt(pi) C N^2 / epsilon)^2
};

/// y^N = u_k - pi_N u_k for the first N basis functions of a sphere table.
TruncatedState truncate_high_frequency(const CoherentState& state, const SpectrumTable& table, int N, double epsilon);

/// Half-wave propagation e^{-it sqrt(Laplacian)} of a sphere coherent state through its spherical
/// harmonic expansion up to degree L = k + 8 sqrt(k) + 10, on a Gauss-Legendre x uniform grid with
/// FFTs in longitude.
class SphereBeam {
public:
    explicit SphereBeam(const CoherentState& state, int degree = 0);
    ~SphereBeam();
    SphereBeam(const SphereBeam&) = delete;
    SphereBeam& operator=(const SphereBeam&) = delete;

    int degree() const;
    const CoherentState& state() const;
    /// Sum of |c_lm|^2 at time t (independent of t).
    double coefficient_norm_squared() const;
    /// Grid L2 norm squared of the state at time 0 (before the expansion).
    double initial_norm_squared() const;
    /// Subtract the projection on degrees l < lmin (optional high-frequency truncation).
    void remove_low_degrees(int lmin);

    struct Snapshot {
        double t = 0.0;
        double total_mass = 0.0;
        double tube_mass = 0.0;     // mass within geodesic distance r of gamma(t)
        double centroid_error = 0.0;  // distance from the normalized centroid to gamma(t)
        Vec3 center = Vec3::Zero();   // gamma(t)
    };
    /// Propagate to time t and measure the mass near gamma(t) = pi(phi_t(x0, xi0)).
    Snapshot snapshot(double t, double tube_radius) const;
    /// int f |u_t|^2 dx.
    double expectation(double t, const std::function<double(const Vec3&)>& f) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace zoll
