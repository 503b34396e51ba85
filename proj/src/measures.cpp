#include "zoll/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "zoll/errors.hpp"
#include "zoll/functionals.hpp"
#include "zoll/optimize.hpp"

namespace zoll {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------------------------
// InvariantMeasure

InvariantMeasure::InvariantMeasure(Variant v, std::string label) : v_(std::move(v)), label_(std::move(label)) {
    if (label_.empty()) label_ = std::string(kind());
}

InvariantMeasure InvariantMeasure::dirac(const PhasePoint& start, double period, std::string label) {
    if (!(period > 0.0)) throw PreconditionError("Dirac orbit needs a positive period");
    return InvariantMeasure(DiracOrbit{start, period}, std::move(label));
}

InvariantMeasure InvariantMeasure::liouville() { return InvariantMeasure(Liouville{}, "liouville"); }

InvariantMeasure InvariantMeasure::torus_direction(double angle, bool symmetric) {
    return InvariantMeasure(TorusDirection{angle, symmetric},
                            std::string(symmetric ? "direction_sym(" : "direction(") + fmt(angle) + ")");
}

InvariantMeasure InvariantMeasure::eigen_density(std::shared_ptr<const SpectrumTable> table, std::size_t space,
                                                 Eigen::VectorXd coefficients, std::string label) {
    if (!table || space >= table->size()) throw PreconditionError("eigen density needs a table entry");
    if (coefficients.size() != table->spaces()[space].multiplicity()) {
        throw PreconditionError("coefficient vector does not match the eigenspace");
    }
    const double n = coefficients.norm();
    if (!(n > 0.0)) throw PreconditionError("eigen density needs a nonzero eigenfunction");
    if (label.empty()) label = "eigen_density(lambda=" + fmt(table->spaces()[space].lambda) + ")";
    return InvariantMeasure(EigenDensity{std::move(table), space, coefficients / n}, std::move(label));
}

InvariantMeasure InvariantMeasure::mixture(std::vector<double> weights, std::vector<InvariantMeasure> parts,
                                           std::string label) {
    if (weights.size() != parts.size()) throw PreconditionError("mixture weights and parts differ in length");
    for (double w : weights) {
        if (!(w >= 0.0)) throw PreconditionError("mixture weights must be nonnegative");
    }
    return InvariantMeasure(Mixture{std::move(weights), std::move(parts)}, std::move(label));
}

std::string_view InvariantMeasure::kind() const {
    static constexpr std::string_view names[] = {"dirac", "liouville", "torus_direction", "eigen_density", "mixture"};
    return names[v_.index()];
}

double InvariantMeasure::total_mass() const {
    if (const auto* m = std::get_if<Mixture>(&v_)) {
        double s = 0.0;
        for (std::size_t i = 0; i < m->parts.size(); ++i) s += m->weights[i] * m->parts[i].total_mass();
        return s;
    }
    return 1.0;
}

std::vector<std::pair<double, InvariantMeasure>> InvariantMeasure::atoms() const {
    std::vector<std::pair<double, InvariantMeasure>> out;
    if (const auto* m = std::get_if<Mixture>(&v_)) {
        for (std::size_t i = 0; i < m->parts.size(); ++i) {
            for (auto& [w, a] : m->parts[i].atoms()) out.emplace_back(m->weights[i] * w, std::move(a));
        }
    } else {
        out.emplace_back(1.0, *this);
    }
    return out;
}

// ---------------------------------------------------------------------------------------------
// Evaluation

namespace {

double density_integral(const EigenDensity& d, const BaseWeight& f) {
    const Eigenspace& e = d.table->spaces()[d.space];
    const SpectrumTable single(d.table->model(), d.table->lambda_max(), {e});
    const Eigen::MatrixXd G = weighted_gram(single, f);
    return d.coefficients.dot(G * d.coefficients);
}

double fiber_integral(const SurfaceModel& model, const Observable& a, const MeasureEvalOptions& options,
                      const std::vector<double>& angles) {
    double sum = 0.0;
    for (const BaseNode& n : base_quadrature(model, {}, options.base)) {
        double s = 0.0;
        for (double th : angles) s += a(model.phase_point_from_angle(n.x, th));
        sum += n.weight * s / static_cast<double>(angles.size());
    }
    return sum / model.total_area();
}

double eval_atom(const GeodesicFlow& flow, const InvariantMeasure& mu, const Observable& a,
                 const MeasureEvalOptions& options) {
    const SurfaceModel& model = flow.model();
    return std::visit(
        [&](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, DiracOrbit>) {
                return birkhoff_average(flow, a, m.start, m.period, options.birkhoff);
            } else if constexpr (std::is_same_v<T, Liouville>) {
                if (a.is_pullback()) return integrate(model, a.base_weight(), options.base) / model.total_area();
                std::vector<double> angles(static_cast<std::size_t>(options.directions));
                for (std::size_t j = 0; j < angles.size(); ++j) angles[j] = kTwoPi * j / angles.size();
                return fiber_integral(model, a, options, angles);
            } else if constexpr (std::is_same_v<T, TorusDirection>) {
                if (model.kind() != SurfaceKind::Torus) throw UnsupportedError("direction measures live on the torus");
                if (a.is_pullback()) return integrate(model, a.base_weight(), options.base) / model.total_area();
                std::vector<double> angles{m.angle};
                if (m.symmetric) angles.push_back(m.angle + kPi);
                return fiber_integral(model, a, options, angles);
            } else if constexpr (std::is_same_v<T, EigenDensity>) {
                if (!a.is_pullback()) {
                    throw UnsupportedError("eigenfunction densities only integrate pullback observables");
                }
                return density_integral(m, a.base_weight());
            } else {
                double s = 0.0;
                for (std::size_t i = 0; i < m.parts.size(); ++i) {
                    if (m.weights[i] != 0.0) s += m.weights[i] * eval_atom(flow, m.parts[i], a, options);
                }
                return s;
            }
        },
        mu.variant());
}

}  // namespace

double measure_eval(const GeodesicFlow& flow, const InvariantMeasure& mu, const Observable& a,
                    const MeasureEvalOptions& options) {
    return eval_atom(flow, mu, a, options);
}

double pushforward_eval(const GeodesicFlow& flow, const InvariantMeasure& mu, const BaseWeight& f,
                        const MeasureEvalOptions& options) {
    return measure_eval(flow, mu, Observable::pullback(f.label, f.f, -std::numeric_limits<double>::infinity(),
                                                       std::numeric_limits<double>::infinity(), f.hints),
                        options);
}

double pushforward_eval(const GeodesicFlow& flow, const InvariantMeasure& mu, const Region& region,
                        const MeasureEvalOptions& options) {
    return measure_eval(flow, mu, Observable::indicator(region), options);
}

double invariance_defect(const GeodesicFlow& flow, const InvariantMeasure& mu, const Observable& a, double s,
                         const MeasureEvalOptions& options) {
    const Observable moved = Observable::smooth_symbol(
        a.label() + " o phi_" + fmt(s), [&flow, a, s](const PhasePoint& z) { return a(flow.flow(z, s)); }, a.lower(),
        a.upper());
    return std::abs(measure_eval(flow, mu, moved, options) - measure_eval(flow, mu, a, options));
}

// ---------------------------------------------------------------------------------------------
// g1, g1'', g1'

FunctionalReport g1(const SpectrumTable& table, const BaseWeight& weight) {
    FunctionalReport r;
    r.functional = "g1";
    r.tag = EstimateTag::UpperBound;
    r.value = std::numeric_limits<double>::infinity();
    double worst_error = 0.0;
    for (const MassMatrix& m : mass_matrices(table, weight)) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.matrix);
        const double v = es.eigenvalues()[0];
        r.trace.push_back({m.lambda, v});
        worst_error = std::max(worst_error, m.error_estimate);
        if (m.accuracy_warning) r.notes.push_back("mass matrix at lambda=" + fmt(m.lambda) + " above tolerance");
        if (v < r.value) {
            r.value = v;
            r.eigenvalue = m.lambda;
            const Eigen::VectorXd y = es.eigenvectors().col(0);
            r.coefficients.assign(y.data(), y.data() + y.size());
        }
    }
    r.measure_label = weight.label;
    r.meta["lambda_max"] = table.lambda_max();
    r.meta["quadrature_error"] = worst_error;
    return r;
}

FunctionalReport g1(const SpectrumTable& table, const Region& region) { return g1(table, weight_of(region)); }

FunctionalReport g1(const SpectrumTable& table, const Observable& a) { return g1(table, a.base_weight()); }

namespace {

FunctionalReport family_min(const GeodesicFlow& flow, const Observable& a, const std::vector<InvariantMeasure>& family,
                            const MeasureEvalOptions& options, const std::string& name, bool skip_densities) {
    if (family.empty()) throw PreconditionError(name + " needs a nonempty measure family");
    FunctionalReport r;
    r.functional = name;
    r.tag = EstimateTag::UpperBound;
    r.value = std::numeric_limits<double>::infinity();
    int skipped = 0;
    for (std::size_t i = 0; i < family.size(); ++i) {
        const InvariantMeasure& mu = family[i];
        if (skip_densities && std::holds_alternative<EigenDensity>(mu.variant()) && !a.is_pullback()) {
            ++skipped;
            continue;
        }
        const double v = measure_eval(flow, mu, a, options);
        if (v < r.value) {
            r.value = v;
            r.measure_label = mu.label();
            r.grid_index = static_cast<long>(i);
            if (const auto* d = std::get_if<DiracOrbit>(&mu.variant())) {
                r.argmin = d->start;
            } else {
                r.argmin.reset();
            }
        }
    }
    if (!std::isfinite(r.value)) throw PreconditionError(name + ": no family member can integrate '" + a.label() + "'");
    r.meta["family_size"] = static_cast<double>(family.size());
    if (skipped > 0) {
        r.notes.push_back(std::to_string(skipped) + " eigenfunction densities skipped for a phase-space symbol");
    }
    return r;
}

}  // namespace

FunctionalReport g1_second(const GeodesicFlow& flow, const Observable& a, const std::vector<InvariantMeasure>& family,
                           const MeasureEvalOptions& options) {
    return family_min(flow, a, family, options, "g1pp", false);
}

FunctionalReport g1_second(const GeodesicFlow& flow, const Region& region,
                           const std::vector<InvariantMeasure>& family, const MeasureEvalOptions& options) {
    return g1_second(flow, Observable::indicator(region), family, options);
}

FunctionalReport g1_prime(const GeodesicFlow& flow, const Observable& a, const std::vector<InvariantMeasure>& candidates,
                          const MeasureEvalOptions& options) {
    return family_min(flow, a, candidates, options, "g1p", true);
}

FunctionalReport g1_prime(const GeodesicFlow& flow, const Region& region,
                          const std::vector<InvariantMeasure>& candidates, const MeasureEvalOptions& options) {
    return g1_prime(flow, Observable::indicator(region), candidates, options);
}

// ---------------------------------------------------------------------------------------------
// Families

namespace {

InvariantMeasure great_circle(const SurfaceModel& model, const Vec3& normal) {
    const Vec3 n = normal.normalized();
    Vec3 axis = Vec3::UnitX();
    if (std::abs(n.x()) > 0.6) axis = Vec3::UnitY();
    const Vec3 p = n.cross(axis).normalized();
    const Vec3 v = n.cross(p);
    std::ostringstream os;
    os.precision(4);
    os << "great_circle(" << n.x() << "," << n.y() << "," << n.z() << ")";
    return InvariantMeasure::dirac(model.phase_from_embedded(p, v), kTwoPi, os.str());
}

std::vector<std::pair<int, int>> rational_directions(int max_coefficient) {
    std::vector<std::pair<int, int>> out;
    for (int p = -max_coefficient; p <= max_coefficient; ++p) {
        for (int q = -max_coefficient; q <= max_coefficient; ++q) {
            if ((p != 0 || q != 0) && std::gcd(p, q) == 1) out.emplace_back(p, q);
        }
    }
    return out;
}

double irrational_angle(int j) {
    const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
    double f = std::fmod((j + 1) * golden, 1.0);
    return kTwoPi * f;
}

}  // namespace

std::vector<InvariantMeasure> invariant_family(const GeodesicFlow& flow, const FamilyOptions& options) {
    const SurfaceModel& model = flow.model();
    std::vector<InvariantMeasure> out{InvariantMeasure::liouville()};
    switch (model.kind()) {
        case SurfaceKind::Sphere: {
            for (int axis = 0; axis < 3; ++axis) {
                for (double sign : {1.0, -1.0}) out.push_back(great_circle(model, sign * Vec3::Unit(2 - axis)));
            }
            const double golden = kPi * (3.0 - std::sqrt(5.0));
            const int N = options.sphere_normals;
            for (int i = 0; i < N; ++i) {
                const double z = 1.0 - (2.0 * i + 1.0) / N;
                const double s = std::sqrt(1.0 - z * z);
                out.push_back(great_circle(model, Vec3(s * std::cos(golden * i), s * std::sin(golden * i), z)));
            }
            break;
        }
        case SurfaceKind::Torus: {
            for (const auto& [p, q] : rational_directions(options.torus_max_coefficient)) {
                const double len = std::hypot(p, q);
                const double c = p / len, s = q / len;
                const double spacing = kTwoPi / len;
                for (int j = 0; j < options.torus_offsets; ++j) {
                    const double off = spacing * j / options.torus_offsets;
                    const PhasePoint z = model.normalize(PhasePoint{0, {-s * off, c * off}, {c, s}});
                    out.push_back(InvariantMeasure::dirac(z, kTwoPi * len,
                                                          "closed_orbit(" + std::to_string(p) + "," + std::to_string(q) +
                                                              ",offset=" + fmt(off) + ")"));
                }
            }
            for (int j = 0; j < options.torus_irrational; ++j) {
                out.push_back(InvariantMeasure::torus_direction(irrational_angle(j)));
            }
            break;
        }
        case SurfaceKind::Revolution: {
            const std::optional<double> T = model.common_period();
            int i = 0;
            for (const PhasePoint& z :
                 PhaseGrid::product(model, options.revolution_base, options.revolution_directions).points) {
                double period = 0.0;
                if (T) {
                    period = *T;
                } else if (const auto orbit = detect_period(flow, z, 4.0 * kPi)) {
                    period = orbit->period;
                } else {
                    continue;
                }
                out.push_back(InvariantMeasure::dirac(z, period, "periodic_orbit#" + std::to_string(i++)));
            }
            break;
        }
    }
    return out;
}

std::vector<InvariantMeasure> ql_family(const GeodesicFlow& flow, const FamilyOptions& options) {
    if (flow.model().kind() != SurfaceKind::Torus) return invariant_family(flow, options);
    std::vector<InvariantMeasure> out{InvariantMeasure::liouville()};
    std::vector<double> angles;
    for (const auto& [p, q] : rational_directions(options.torus_max_coefficient)) {
        const double a = std::atan2(q, p);
        if (a >= 0.0 && a < kPi) angles.push_back(a);
    }
    for (int j = 0; j < options.torus_irrational; ++j) angles.push_back(std::fmod(irrational_angle(j), kPi));
    for (double a : angles) out.push_back(InvariantMeasure::torus_direction(a, true));
    return out;
}

// ---------------------------------------------------------------------------------------------
// Orbit alignment and decomposition

PhasePoint aligned_start(const GeodesicFlow& flow, const DiracOrbit& orbit, const Observable& a, int samples,
                         const BirkhoffOptions& birkhoff) {
    if (samples < 2) throw PreconditionError("aligned_start needs at least two samples");
    const Orbit o = flow.orbit(orbit.start);
    const double P = orbit.period;
    const double dt = P / samples;
    std::vector<double> cumulative(static_cast<std::size_t>(samples) + 1, 0.0);
    for (int j = 0; j < samples; ++j) cumulative[j + 1] = cumulative[j] + orbit_integral(o, a, j * dt, (j + 1) * dt, birkhoff);
    const double mean = cumulative.back() / P;
    int best = 0;
    double best_r = 0.0;
    for (int j = 0; j <= samples; ++j) {
        const double r = cumulative[j] - mean * j * dt;
        if (r > best_r) {
            best_r = r;
            best = j;
        }
    }
    // Refine inside the neighbouring cells, where R is continuous and piecewise smooth.
    const int lo = std::max(0, best - 1);
    const int hi = std::min(samples, best + 1);
    auto neg_r = [&](double s) {
        return -(cumulative[lo] + orbit_integral(o, a, lo * dt, s, birkhoff) - mean * s);
    };
    const double sg = opt::golden_section_min(neg_r, lo * dt, hi * dt, 1e-10 * std::max(1.0, P), 200);
    const double s = (-neg_r(sg) > best_r) ? sg : best * dt;
    return flow.model().normalize(o.at(s));
}

double orbit_hausdorff(const GeodesicFlow& flow, const DiracOrbit& a, const DiracOrbit& b, int samples) {
    const SurfaceModel& model = flow.model();
    auto one_sided = [&](const DiracOrbit& from, const DiracOrbit& to) {
        const Orbit of = flow.orbit(from.start);
        const Orbit ot = flow.orbit(to.start);
        std::vector<PhasePoint> dense;
        const double dt = to.period / samples;
        for (int j = 0; j < samples; ++j) dense.push_back(ot.at(j * dt));
        double worst = 0.0;
        for (int i = 0; i < samples; ++i) {
            const PhasePoint p = of.at(from.period * i / samples);
            int nearest = 0;
            double dmin = std::numeric_limits<double>::infinity();
            for (int j = 0; j < samples; ++j) {
                const double d = model.phase_distance(p, dense[j]);
                if (d < dmin) {
                    dmin = d;
                    nearest = j;
                }
            }
            auto d = [&](double t) { return model.phase_distance(p, ot.at(t)); };
            const double tg = opt::golden_section_min(d, (nearest - 1) * dt, (nearest + 1) * dt, 1e-12, 200);
            worst = std::max(worst, std::min(dmin, d(tg)));
        }
        return worst;
    };
    return std::max(one_sided(a, b), one_sided(b, a));
}

Decomposition decompose_along(const GeodesicFlow& flow, const InvariantMeasure& mu, const PeriodicOrbit& orbit,
                              double tol) {
    const DiracOrbit target{orbit.start, orbit.period};
    std::vector<double> weights;
    std::vector<InvariantMeasure> parts;
    Decomposition out{InvariantMeasure::mixture({}, {}, "remainder"), 0.0, {}};
    const auto atoms = mu.atoms();
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const auto& [w, atom] = atoms[i];
        if (std::holds_alternative<EigenDensity>(atom.variant())) {
            throw UnsupportedError("cannot decompose a measure with eigenfunction-density components");
        }
        if (const auto* d = std::get_if<DiracOrbit>(&atom.variant())) {
            if (orbit_hausdorff(flow, *d, target) <= tol) {
                out.weight += w;
                out.matched.push_back(i);
                continue;
            }
        }
        weights.push_back(w);
        parts.push_back(atom);
    }
    out.remainder = InvariantMeasure::mixture(std::move(weights), std::move(parts), "remainder");
    return out;
}

// ---------------------------------------------------------------------------------------------
// Empirical quantum limits

std::vector<Region> ql_dictionary(const SurfaceModel& model) {
    std::vector<std::string> d;
    switch (model.kind()) {
        case SurfaceKind::Sphere:
            d = {"cap(lat>0)",          "cap(lat>pi/4)",         "cap(lat>pi/3)",          "cap(lat<-pi/4)",
                 "band(|lat|<pi/12)",   "band(|lat|<pi/6)",      "band(|lat|<pi/3)",       "tube(meridian(0),0.5)",
                 "tube(meridian(pi/2),0.5)", "tube(meridian(pi/4),0.5)", "tube(equator[0:pi],0.3)",
                 "intersection(cap(lat>0),tube(meridian(0),0.8))"};
            break;
        case SurfaceKind::Torus:
            d = {"strip(0,1)",         "strip(1,2)",          "strip(2,3.5)",        "strip(0,1,x2)",
                 "strip(2,3,x2)",      "strip(4,5.5,x2)",     "tube(hline(pi),0.3)", "tube(vline(1),0.3)",
                 "tube(seg(0,0,pi/4,8.8),0.3)", "intersection(strip(0,3),strip(0,3,x2))", "strip(4,6)",
                 "strip(1,1.5,x2)"};
            break;
        case SurfaceKind::Revolution: throw UnsupportedError("no moment dictionary for surfaces of revolution");
    }
    std::vector<Region> out;
    for (const std::string& s : d) out.push_back(make_region(model, s));
    return out;
}

std::vector<double> region_moments(const SpectrumTable& table, std::size_t space, const Eigen::VectorXd& coefficients,
                                   const std::vector<Region>& dictionary) {
    const SpectrumTable single(table.model(), table.lambda_max(), {table.spaces().at(space)});
    const BaseQuadratureSpec spec = spectral_quadrature(table);
    std::vector<double> out;
    for (const Region& r : dictionary) {
        const Eigen::MatrixXd G = eigenspace_grams(single, weight_of(r), spec).front();
        out.push_back(coefficients.dot(G * coefficients));
    }
    return out;
}

QLSequenceResult ql_from_sequence(std::shared_ptr<const SpectrumTable> table, const QLSequenceOptions& options,
                                  const BaseWeight* target) {
    if (!table) throw PreconditionError("ql_from_sequence needs a spectrum table");
    const SurfaceModel& model = table->model();
    const bool sphere = model.kind() == SurfaceKind::Sphere;
    if (!sphere && (options.strategy == QLStrategy::Zonal || options.strategy == QLStrategy::Sectoral)) {
        throw UnsupportedError("zonal and sectoral sequences exist on the sphere only");
    }
    if (options.strategy == QLStrategy::Extremal && target == nullptr) {
        throw PreconditionError("the extremal strategy needs a target weight");
    }
    const std::vector<Region> dict = ql_dictionary(model);
    QLSequenceResult result;
    for (const Region& r : dict) result.dictionary.push_back(r.descriptor());

    const BaseQuadratureSpec spec = spectral_quadrature(*table);
    std::vector<std::vector<Eigen::MatrixXd>> grams;  // [region][space]
    for (const Region& r : dict) grams.push_back(eigenspace_grams(*table, weight_of(r), spec));
    std::vector<Eigen::MatrixXd> target_grams;
    if (options.strategy == QLStrategy::Extremal) target_grams = eigenspace_grams(*table, *target, spec);

    struct Member {
        std::size_t space;
        Eigen::VectorXd y;
        std::vector<double> moments;
    };
    std::vector<Member> members;
    for (std::size_t s = 0; s < table->size(); ++s) {
        const Eigenspace& e = table->spaces()[s];
        if (e.lambda < options.lambda_min || e.lambda == 0.0) continue;
        const int d = e.multiplicity();
        std::vector<Eigen::VectorXd> ys;
        switch (options.strategy) {
            case QLStrategy::Zonal:
            case QLStrategy::Sectoral: {
                const int l = e.basis.front().l;
                Eigen::VectorXd y = Eigen::VectorXd::Zero(d);
                y[options.strategy == QLStrategy::Zonal ? l : 2 * l] = 1.0;
                ys.push_back(y);
                break;
            }
            case QLStrategy::Basis:
                for (int i = 0; i < d; ++i) ys.push_back(Eigen::VectorXd::Unit(d, i));
                break;
            case QLStrategy::Extremal: {
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(target_grams[s]);
                ys.push_back(es.eigenvectors().col(0));
                break;
            }
        }
        for (Eigen::VectorXd& y : ys) {
            Member m{s, y, {}};
            for (const auto& g : grams) m.moments.push_back(y.dot(g[s] * y));
            members.push_back(std::move(m));
        }
    }
    if (members.empty()) {
        result.diagnostics.push_back("no eigenfunctions above lambda_min");
        return result;
    }

    // Complete-linkage agglomeration under the sup norm.
    const std::size_t n = members.size();
    auto dist = [&](std::size_t i, std::size_t j) {
        double d = 0.0;
        for (std::size_t k = 0; k < dict.size(); ++k) d = std::max(d, std::abs(members[i].moments[k] - members[j].moments[k]));
        return d;
    };
    Eigen::MatrixXd D(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) D(i, j) = dist(i, j);
    }
    std::vector<std::vector<std::size_t>> clusters;
    for (std::size_t i = 0; i < n; ++i) clusters.push_back({i});
    auto linkage = [&](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
        double d = 0.0;
        for (std::size_t i : a) {
            for (std::size_t j : b) d = std::max(d, D(i, j));
        }
        return d;
    };
    while (clusters.size() > 1) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < clusters.size(); ++i) {
            for (std::size_t j = i + 1; j < clusters.size(); ++j) {
                const double d = linkage(clusters[i], clusters[j]);
                if (d < best) {
                    best = d;
                    bi = i;
                    bj = j;
                }
            }
        }
        if (best > options.diameter) break;
        clusters[bi].insert(clusters[bi].end(), clusters[bj].begin(), clusters[bj].end());
        clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bj));
    }

    for (const auto& c : clusters) {
        if (static_cast<int>(c.size()) < options.min_members) continue;
        std::size_t top = c.front();
        QLCluster q{{}, {}, InvariantMeasure::liouville()};
        for (std::size_t i : c) {
            q.eigenvalues.push_back(table->spaces()[members[i].space].lambda);
            if (table->spaces()[members[i].space].lambda > table->spaces()[members[top].space].lambda) top = i;
        }
        std::sort(q.eigenvalues.begin(), q.eigenvalues.end());
        q.moments = members[top].moments;
        q.representative = InvariantMeasure::eigen_density(table, members[top].space, members[top].y);
        result.clusters.push_back(std::move(q));
    }
    if (result.clusters.empty()) {
        result.diagnostics.push_back("no cluster with at least " + std::to_string(options.min_members) + " members");
    }
    return result;
}

}  // namespace zoll
