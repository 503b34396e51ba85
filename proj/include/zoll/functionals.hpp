#pragma once

#include <vector>

#include "zoll/geodesic.hpp"
#include "zoll/optimize.hpp"
#include "zoll/region.hpp"
#include "zoll/report.hpp"

namespace zoll {

/// Sample of S*M: a base grid times a direction grid, plus optional extra seed points.
struct PhaseGrid {
    std::vector<PhasePoint> points;
    int base_count = 0;
    int direction_count = 0;
    int refinement_depth = 0;

    /// Fibonacci points on the sphere, a rows x cols lattice on the torus, an (r, theta) lattice
    /// avoiding the poles on surfaces of revolution; directions equally spaced in angle.
    static PhaseGrid product(const SurfaceModel& model, int base, int directions);
    static PhaseGrid single(const PhasePoint& z);
    /// 48 base x 64 directions.
    static PhaseGrid standard(const SurfaceModel& model) { return product(model, 48, 64); }

    PhaseGrid with(const std::vector<PhasePoint>& extra) const;
};

struct G2Options {
    int seeds = 8;        // simplex descents from the best grid points
    bool refine = true;
    opt::SimplexOptions simplex{0.1, 1e-7, 300};
    BirkhoffOptions birkhoff;
};

/// g2^T(a) = inf_z a_T(z): grid minimum followed by simplex descent; an upper bound of the true inf.
FunctionalReport g2T(const GeodesicFlow& flow, const Observable& a, double T, const PhaseGrid& grid,
                     const G2Options& options = {});

struct DoublingOptions {
    double T0 = kTwoPi;
    int K = 3;            // horizons T0 * 2^k, k = 0..K
    double tol = 1e-6;    // early stop once the increment falls below this (after k >= 2)
    double monotone_tol = 1e-9;
};

/// g2(a) = sup_T g2^T(a) over a doubling schedule; trace carries (T, g2^T).
FunctionalReport g2(const GeodesicFlow& flow, const Observable& a, const PhaseGrid& grid,
                    const DoublingOptions& schedule = {}, const G2Options& options = {});

struct TailOptions {
    double tail_fraction = 0.3;
    bool refine = true;
    int seeds = 8;
    opt::SimplexOptions simplex{0.05, 1e-6, 150};
    BirkhoffOptions birkhoff;
};

/// g2'(a) = inf_z liminf_T a_T(z), with the liminf replaced by the minimum over the last
/// ceil(tail_fraction * n) horizons.
FunctionalReport g2prime(const GeodesicFlow& flow, const Observable& a, const PhaseGrid& grid,
                         const std::vector<double>& horizons, const TailOptions& options = {});

/// Horizons m * T for m = 1..count, the schedule used after a doubling run ending at T.
std::vector<double> multiples(double T, int count);

/// Minimum over the tail window of an increasing horizon list.
double tail_min(const std::vector<double>& averages, double tail_fraction);

/// Argmax of T -> g2^T(a) on [lo, hi] by golden-section search: the horizon where the finite-time
/// functional peaks (2pi on the round sphere).
double stabilization_horizon(const GeodesicFlow& flow, const Observable& a, const PhaseGrid& grid, double lo,
                             double hi, const G2Options& options = {});

/// Witness of g2 = 0 < g2' = 1: complement of the tubes of radius r around gamma([2^k, 2^k + k]),
/// k = 1..K, for a non-periodic ray gamma from z. Throws PreconditionError for periodic rays.
Region build_ray_witness(const GeodesicFlow& flow, const PhasePoint& z, int K, double tube_radius);

/// Points gamma(2^k), k = 1..K, whose orbits start along the witness segments.
std::vector<PhasePoint> ray_witness_seeds(const GeodesicFlow& flow, const PhasePoint& z, int K);

}  // namespace zoll
