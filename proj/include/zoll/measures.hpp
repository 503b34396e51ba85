#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "zoll/geodesic.hpp"
#include "zoll/region.hpp"
#include "zoll/report.hpp"
#include "zoll/spectral.hpp"

namespace zoll {

/// Normalized Dirac measure along a periodic orbit of the flow.
struct DiracOrbit {
    PhasePoint start;
    double period = 0.0;
};

/// Normalized Liouville measure on S*M.
struct Liouville {};

/// Flat torus: uniform base measure times a Dirac in the direction angle theta; the symmetric
/// version averages theta and theta + pi.
struct TorusDirection {
    double angle = 0.0;
    bool symmetric = false;
};

/// Density phi^2 dx on M of a unit eigenfunction phi = sum_i c_i phi_i in one eigenspace.
/// Only pullback observables can be evaluated against it.
struct EigenDensity {
    std::shared_ptr<const SpectrumTable> table;
    std::size_t space = 0;
    Eigen::VectorXd coefficients;
};

class InvariantMeasure;

struct Mixture {
    std::vector<double> weights;
    std::vector<InvariantMeasure> parts;
};

/// A finite nonnegative measure on S*M, flow invariant for every variant except EigenDensity,
/// which lives on the base and is only approximately invariant.
class InvariantMeasure {
public:
    using Variant = std::variant<DiracOrbit, Liouville, TorusDirection, EigenDensity, Mixture>;

    InvariantMeasure(Variant v, std::string label = {});

    static InvariantMeasure dirac(const PhasePoint& start, double period, std::string label = {});
    static InvariantMeasure liouville();
    static InvariantMeasure torus_direction(double angle, bool symmetric = false);
    static InvariantMeasure eigen_density(std::shared_ptr<const SpectrumTable> table, std::size_t space,
                                          Eigen::VectorXd coefficients, std::string label = {});
    static InvariantMeasure mixture(std::vector<double> weights, std::vector<InvariantMeasure> parts,
                                    std::string label = {});

    const Variant& variant() const { return v_; }
    const std::string& label() const { return label_; }
    /// Variant name: "dirac", "liouville", "torus_direction", "eigen_density", "mixture".
    std::string_view kind() const;
    double total_mass() const;
    bool is_dirac() const { return std::holds_alternative<DiracOrbit>(v_); }

    /// Nested mixtures expanded into (weight, atom) pairs; atoms are never mixtures.
    std::vector<std::pair<double, InvariantMeasure>> atoms() const;

private:
    Variant v_;
    std::string label_;
};

struct MeasureEvalOptions {
    BirkhoffOptions birkhoff;
    BaseQuadratureSpec base;
    int directions = 64;  // trapezoid nodes on each fiber for Liouville integrals of phase symbols
};

/// int a dmu.
double measure_eval(const GeodesicFlow& flow, const InvariantMeasure& mu, const Observable& a,
                    const MeasureEvalOptions& options = {});

/// (pi_* mu)(f) = int f o pi dmu for a base weight.
double pushforward_eval(const GeodesicFlow& flow, const InvariantMeasure& mu, const BaseWeight& f,
                        const MeasureEvalOptions& options = {});
double pushforward_eval(const GeodesicFlow& flow, const InvariantMeasure& mu, const Region& region,
                        const MeasureEvalOptions& options = {});

/// |mu(a o phi_s) - mu(a)|.
double invariance_defect(const GeodesicFlow& flow, const InvariantMeasure& mu, const Observable& a, double s,
                         const MeasureEvalOptions& options = {});

/// g1(w) = inf over eigenfunctions in the table of int w phi^2: smallest mass-matrix eigenvalue over
/// all eigenspaces. Certificate: eigenvalue and coefficient vector. Upper bound (finite truncation).
FunctionalReport g1(const SpectrumTable& table, const BaseWeight& weight);
FunctionalReport g1(const SpectrumTable& table, const Region& region);
FunctionalReport g1(const SpectrumTable& table, const Observable& a);

/// inf over a measure family of int a dmu, with the minimizing member as certificate.
FunctionalReport g1_second(const GeodesicFlow& flow, const Observable& a, const std::vector<InvariantMeasure>& family,
                           const MeasureEvalOptions& options = {});
FunctionalReport g1_second(const GeodesicFlow& flow, const Region& region,
                           const std::vector<InvariantMeasure>& family, const MeasureEvalOptions& options = {});

/// inf over quantum-limit candidates of int a dnu. Eigenfunction densities are skipped for
/// observables that are not pullbacks. Tagged two-sided on the sphere, where the candidate family
/// represents every invariant measure.
FunctionalReport g1_prime(const GeodesicFlow& flow, const Observable& a, const std::vector<InvariantMeasure>& candidates,
                          const MeasureEvalOptions& options = {});
FunctionalReport g1_prime(const GeodesicFlow& flow, const Region& region,
                          const std::vector<InvariantMeasure>& candidates, const MeasureEvalOptions& options = {});

struct FamilyOptions {
    int sphere_normals = 200;       // great circles with Fibonacci normals, plus the three axes
    int torus_max_coefficient = 3;  // rational directions (p, q) with |p|, |q| <= this
    int torus_offsets = 8;          // parallel closed orbits per rational direction
    int torus_irrational = 8;       // additional direction measures at irrational angles
    int revolution_base = 24;       // sampled base points times directions on revolution surfaces
    int revolution_directions = 16;
};

/// Ergodic atoms of I(S*M) used for g1'': great-circle Diracs (sphere), rational-orbit Diracs and
/// direction measures (torus), sampled periodic orbits (Zoll revolution), plus Liouville.
std::vector<InvariantMeasure> invariant_family(const GeodesicFlow& flow, const FamilyOptions& options = {});

/// Quantum-limit candidates. Sphere: the invariant family (every invariant measure is a QL).
/// Torus: Liouville and symmetric direction measures, the analytic QLs.
std::vector<InvariantMeasure> ql_family(const GeodesicFlow& flow, const FamilyOptions& options = {});

/// Point on the orbit of a Dirac atom from which every partial average of a is at most the orbit
/// mean: the argmax of the cumulative deviation int_0^s (a - mean).
PhasePoint aligned_start(const GeodesicFlow& flow, const DiracOrbit& orbit, const Observable& a,
                         int samples = 512, const BirkhoffOptions& birkhoff = {});

/// Result of splitting mu = mu1 + a delta_gamma. `remainder` is an unnormalized mixture of mass 1 - a.
struct Decomposition {
    InvariantMeasure remainder;
    double weight = 0.0;
    std::vector<std::size_t> matched;  // atom indices recognized as gamma
};

/// Hausdorff distance between two periodic orbits, from `samples` points on each side with exact
/// nearest-point refinement along the other orbit.
double orbit_hausdorff(const GeodesicFlow& flow, const DiracOrbit& a, const DiracOrbit& b, int samples = 256);

/// Throws UnsupportedError if mu contains eigenfunction densities.
Decomposition decompose_along(const GeodesicFlow& flow, const InvariantMeasure& mu, const PeriodicOrbit& orbit,
                              double tol = 1e-6);

enum class QLStrategy {
    Zonal,       // sphere Y(l, 0)
    Sectoral,    // sphere Y(l, l)
    Basis,       // every basis function of every eigenspace
    Extremal,    // mass-minimizing eigenfunction of each eigenspace for the target weight
};

struct QLCluster {
    std::vector<double> moments;     // representative moment vector over the region dictionary
    std::vector<double> eigenvalues; // subsequence of eigenvalues in the cluster
    InvariantMeasure representative; // density of the member with the largest eigenvalue
};

struct QLSequenceResult {
    std::vector<std::string> dictionary;
    std::vector<QLCluster> clusters;  // stable clusters only (at least min_members)
    std::vector<std::string> diagnostics;
};

struct QLSequenceOptions {
    QLStrategy strategy = QLStrategy::Zonal;
    double diameter = 1e-2;
    int min_members = 3;
    double lambda_min = 0.0;  // members are taken from eigenvalues >= this
};

/// The 12-region moment dictionary used for weak-limit detection.
std::vector<Region> ql_dictionary(const SurfaceModel& model);

/// Moments int_{w_j} phi^2 over the dictionary for one eigenfunction.
std::vector<double> region_moments(const SpectrumTable& table, std::size_t space, const Eigen::VectorXd& coefficients,
                                   const std::vector<Region>& dictionary);

/// Clusters eigenfunction moment vectors (complete linkage, sup-norm diameter) and returns each
/// stable cluster as an empirical QL candidate. `target` is used by the Extremal strategy.
QLSequenceResult ql_from_sequence(std::shared_ptr<const SpectrumTable> table, const QLSequenceOptions& options,
                                  const BaseWeight* target = nullptr);

}  // namespace zoll
