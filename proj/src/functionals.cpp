#include "zoll/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "zoll/errors.hpp"

namespace zoll {

std::string_view to_string(EstimateTag tag) {
    switch (tag) {
        case EstimateTag::UpperBound: return "upper-bound";
        case EstimateTag::LowerBound: return "lower-bound";
        case EstimateTag::TwoSided: return "two-sided";
    }
    return "two-sided";
}

// ---------------------------------------------------------------------------------------------
// Grids

PhaseGrid PhaseGrid::product(const SurfaceModel& model, int base, int directions) {
    if (base < 1 || directions < 1) throw PreconditionError("phase grid needs positive sizes");
    std::vector<ChartPoint> xs;
    switch (model.kind()) {
        case SurfaceKind::Sphere: {
            const double golden = kPi * (3.0 - std::sqrt(5.0));
            for (int i = 0; i < base; ++i) {
                const double z = 1.0 - (2.0 * i + 1.0) / base;
                const double s = std::sqrt(1.0 - z * z);
                const double lon = golden * i;
                xs.push_back(model.chart_point_from_embedded(Vec3(s * std::cos(lon), s * std::sin(lon), z)));
            }
            break;
        }
        case SurfaceKind::Torus:
        case SurfaceKind::Revolution: {
            int rows = static_cast<int>(std::floor(std::sqrt(static_cast<double>(base))));
            while (base % rows != 0) --rows;
            const int cols = base / rows;
            const auto [lo, hi] = model.canonical_domain();
            for (int i = 0; i < cols; ++i) {
                for (int j = 0; j < rows; ++j) {
                    const double u = lo[0] + (hi[0] - lo[0]) * (i + 0.5) / cols;
                    const double v = lo[1] + (hi[1] - lo[1]) * (j + 0.5) / rows;
                    xs.push_back(model.from_canonical({u, v}));
                }
            }
            break;
        }
    }
    PhaseGrid g;
    g.base_count = base;
    g.direction_count = directions;
    g.points.reserve(static_cast<std::size_t>(base) * directions);
    for (const ChartPoint& x : xs) {
        for (int j = 0; j < directions; ++j) g.points.push_back(model.phase_point_from_angle(x, kTwoPi * j / directions));
    }
    return g;
}

PhaseGrid PhaseGrid::single(const PhasePoint& z) {
    PhaseGrid g;
    g.points = {z};
    g.base_count = 1;
    g.direction_count = 1;
    return g;
}

PhaseGrid PhaseGrid::with(const std::vector<PhasePoint>& extra) const {
    PhaseGrid g = *this;
    g.points.insert(g.points.end(), extra.begin(), extra.end());
    return g;
}

// ---------------------------------------------------------------------------------------------
// Helpers

namespace {

constexpr double kHuge = std::numeric_limits<double>::max();

// Indices of the n smallest values; ties broken by index.
std::vector<std::size_t> best_indices(const std::vector<double>& values, int n) {
    std::vector<std::size_t> idx(values.size());
    std::iota(idx.begin(), idx.end(), 0);
    const auto k = std::min<std::size_t>(static_cast<std::size_t>(std::max(n, 1)), idx.size());
    std::partial_sort(idx.begin(), idx.begin() + static_cast<long>(k), idx.end(), [&](std::size_t a, std::size_t b) {
        return values[a] < values[b] || (values[a] == values[b] && a < b);
    });
    idx.resize(k);
    return idx;
}

// Objective wrapper: integration failures (revolution poles) score as +huge.
template <class F>
double guarded(F&& f) {
    try {
        return f();
    } catch (const IntegrationError&) {
        return kHuge;
    } catch (const DomainError&) {
        return kHuge;
    }
}

struct Descent {
    double value = kHuge;
    PhasePoint z;
    long index = -1;
    int evaluations = 0;
};

// Grid minimum then simplex descent from the best seeds on a scalar objective of z.
template <class Objective>
Descent minimize_over(const SurfaceModel& model, const PhaseGrid& grid, const std::vector<double>& values,
                      Objective&& objective, bool refine, int seeds, const opt::SimplexOptions& simplex,
                      const std::vector<PhasePoint>& extra_seeds = {}) {
    Descent best;
    const auto order = best_indices(values, seeds);
    best.value = values[order.front()];
    best.z = grid.points[order.front()];
    best.index = static_cast<long>(order.front());
    if (!refine) return best;
    std::vector<PhasePoint> starts;
    for (std::size_t i : order) starts.push_back(grid.points[i]);
    starts.insert(starts.end(), extra_seeds.begin(), extra_seeds.end());
    for (const PhasePoint& z0 : starts) {
        auto f = [&](const std::vector<double>& d) {
            ++best.evaluations;
            const std::array<double, 3> dd{d[0], d[1], d[2]};
            return guarded([&] { return objective(model.perturb(z0, dd)); });
        };
        const opt::SimplexResult r = opt::nelder_mead(f, {0.0, 0.0, 0.0}, simplex);
        if (r.value < best.value) {
            const std::array<double, 3> dd{r.x[0], r.x[1], r.x[2]};
            best.value = r.value;
            best.z = model.perturb(z0, dd);
        }
    }
    return best;
}

}  // namespace

double tail_min(const std::vector<double>& averages, double tail_fraction) {
    if (averages.empty()) throw PreconditionError("tail_min of an empty list");
    const auto n = averages.size();
    const auto k = std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(tail_fraction * n - 1e-12)), 1, n);
    return *std::min_element(averages.end() - static_cast<long>(k), averages.end());
}

std::vector<double> multiples(double T, int count) {
    std::vector<double> out;
    for (int m = 1; m <= count; ++m) out.push_back(m * T);
    return out;
}

// ---------------------------------------------------------------------------------------------
// g2^T, g2, g2'

FunctionalReport g2T(const GeodesicFlow& flow, const Observable& a, double T, const PhaseGrid& grid,
                     const G2Options& options) {
    if (!(T > 0.0)) throw PreconditionError("g2T needs T > 0");
    if (grid.points.empty()) throw PreconditionError("g2T needs a nonempty grid");
    std::vector<double> values(grid.points.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] = guarded([&] { return birkhoff_average(flow, a, grid.points[i], T, options.birkhoff); });
    }
    const bool refine = options.refine && a.kind() != ObservableKind::Constant;
    auto objective = [&](const PhasePoint& z) { return birkhoff_average(flow, a, z, T, options.birkhoff); };
    const Descent d = minimize_over(flow.model(), grid, values, objective, refine, options.seeds, options.simplex);

    FunctionalReport r;
    r.functional = "g2T";
    r.value = d.value;
    r.tag = EstimateTag::UpperBound;
    r.argmin = d.z;
    r.grid_index = d.index;
    r.trace.push_back({T, d.value});
    r.meta["T"] = T;
    r.meta["grid_points"] = static_cast<double>(grid.points.size());
    r.meta["descent_evaluations"] = d.evaluations;
    r.meta["grid_min"] = values[static_cast<std::size_t>(d.index)];
    return r;
}

FunctionalReport g2(const GeodesicFlow& flow, const Observable& a, const PhaseGrid& grid,
                    const DoublingOptions& schedule, const G2Options& options) {
    if (schedule.K < 2) throw PreconditionError("g2 needs K >= 2");
    if (!(schedule.T0 > 0.0)) throw PreconditionError("g2 needs T0 > 0");
    std::vector<double> horizons;
    for (int k = 0; k <= schedule.K; ++k) horizons.push_back(schedule.T0 * std::ldexp(1.0, k));

    // One pass per grid point yields every horizon on the shared grid.
    std::vector<std::vector<double>> per_horizon(horizons.size(), std::vector<double>(grid.points.size()));
    for (std::size_t i = 0; i < grid.points.size(); ++i) {
        std::vector<double> av;
        try {
            av = birkhoff_averages(flow, a, grid.points[i], horizons, options.birkhoff);
        } catch (const IntegrationError&) {
            av.assign(horizons.size(), kHuge);
        }
        for (std::size_t k = 0; k < horizons.size(); ++k) per_horizon[k][i] = av[k];
    }

    FunctionalReport r;
    r.functional = "g2";
    r.tag = EstimateTag::TwoSided;
    const bool refine = options.refine && a.kind() != ObservableKind::Constant;
    std::vector<PhasePoint> carry;
    double best = -kHuge;
    for (std::size_t k = 0; k < horizons.size(); ++k) {
        const double T = horizons[k];
        auto objective = [&](const PhasePoint& z) { return birkhoff_average(flow, a, z, T, options.birkhoff); };
        const Descent d =
            minimize_over(flow.model(), grid, per_horizon[k], objective, refine, options.seeds, options.simplex, carry);
        carry = {d.z};
        if (!r.trace.empty() && d.value < r.trace.back().value - schedule.monotone_tol) r.monotone = false;
        r.trace.push_back({T, d.value});
        if (d.value > best) {
            best = d.value;
            r.argmin = d.z;
            r.grid_index = d.index;
        }
        if (k >= 2 && std::abs(r.trace[k].value - r.trace[k - 1].value) < schedule.tol && k + 1 < horizons.size()) {
            r.notes.push_back("early stop: increment below tolerance");
            break;
        }
    }
    r.value = best;
    r.meta["T0"] = schedule.T0;
    r.meta["K"] = schedule.K;
    r.meta["T_last"] = r.trace.back().parameter;
    if (!r.monotone) r.notes.push_back("doubling trace not monotone within tolerance (refined estimates)");
    return r;
}

FunctionalReport g2prime(const GeodesicFlow& flow, const Observable& a, const PhaseGrid& grid,
                         const std::vector<double>& horizons, const TailOptions& options) {
    if (horizons.empty()) throw PreconditionError("g2prime needs horizons");
    for (std::size_t i = 1; i < horizons.size(); ++i) {
        if (!(horizons[i] > horizons[i - 1])) throw PreconditionError("g2prime horizons must increase");
    }
    std::vector<double> values(grid.points.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] = guarded([&] {
            return tail_min(birkhoff_averages(flow, a, grid.points[i], horizons, options.birkhoff),
                            options.tail_fraction);
        });
    }
    const bool refine = options.refine && a.kind() != ObservableKind::Constant;
    auto objective = [&](const PhasePoint& z) {
        return tail_min(birkhoff_averages(flow, a, z, horizons, options.birkhoff), options.tail_fraction);
    };
    const Descent d = minimize_over(flow.model(), grid, values, objective, refine, options.seeds, options.simplex);

    FunctionalReport r;
    r.functional = "g2prime";
    r.value = d.value;
    r.tag = EstimateTag::TwoSided;
    r.argmin = d.z;
    r.grid_index = d.index;
    const auto av = birkhoff_averages(flow, a, d.z, horizons, options.birkhoff);
    for (std::size_t i = 0; i < horizons.size(); ++i) r.trace.push_back({horizons[i], av[i]});
    r.meta["tail_fraction"] = options.tail_fraction;
    r.meta["T_max"] = horizons.back();
    r.notes.push_back("liminf replaced by the minimum of the tail window of horizon averages");
    return r;
}

double stabilization_horizon(const GeodesicFlow& flow, const Observable& a, const PhaseGrid& grid, double lo,
                             double hi, const G2Options& options) {
    if (!(hi > lo) || !(lo > 0.0)) throw PreconditionError("stabilization_horizon needs 0 < lo < hi");
    auto neg = [&](double T) { return -g2T(flow, a, T, grid, options).value; };
    return opt::golden_section_min(neg, lo, hi, 1e-4 * (hi - lo));
}

// ---------------------------------------------------------------------------------------------
// Ray witness: g2 = 0 while averages along one ray stay near 1

std::vector<PhasePoint> ray_witness_seeds(const GeodesicFlow& flow, const PhasePoint& z, int K) {
    const Orbit orbit = flow.orbit(z);
    std::vector<PhasePoint> out;
    for (int k = 1; k <= K; ++k) out.push_back(orbit.at(std::ldexp(1.0, k)));
    return out;
}

Region build_ray_witness(const GeodesicFlow& flow, const PhasePoint& z, int K, double tube_radius) {
    const SurfaceModel& m = flow.model();
    if (m.kind() != SurfaceKind::Torus) throw UnsupportedError("the witness construction needs the torus");
    if (K < 1) throw PreconditionError("witness needs K >= 1");
    if (!(tube_radius > 0.0)) throw PreconditionError("witness needs a positive tube radius");
    const double horizon = std::ldexp(1.0, K) + K + 1.0;
    if (detect_period(flow, z, horizon, 1e-6)) throw PreconditionError("witness ray must not be periodic");
    const double angle = m.direction_angle(z);
    std::vector<Region> tubes;
    const auto seeds = ray_witness_seeds(flow, z, K);
    for (int k = 1; k <= K; ++k) {
        const PhasePoint& s = seeds[static_cast<std::size_t>(k - 1)];
        const Curve seg = torus_segment(m, s.x, angle, static_cast<double>(k), "gamma[2^" + std::to_string(k) + "]");
        tubes.push_back(Region::tube(seg, tube_radius, false));
    }
    return Region::union_of(tubes).complement();
}

}  // namespace zoll
