// Acceptance run: one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "zoll/coherent.hpp"
#include "zoll/detector.hpp"
#include "zoll/errors.hpp"
#include "zoll/functionals.hpp"
#include "zoll/gramian.hpp"
#include "zoll/measures.hpp"
#include "zoll/suites.hpp"

using namespace zoll;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (!pass) detail << "; ";
            else detail.str("");
            pass = false;
            detail << what;
        }
    }
};

int failures = 0;

void run(int id, const std::string& title, const std::function<void(Outcome&)>& body) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail.str("");
        o.detail << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::printf("[%s] %2d %s | %s | %.1fs\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.str().c_str(), secs);
    std::fflush(stdout);
}

double elapsed_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

// Fraction of a great circle of inclination `incl` inside |lat| <= alpha, by arc sampling.
double band_fraction(double incl, double alpha) {
    const int N = 200000;
    int inside = 0;
    for (int j = 0; j < N; ++j) {
        const double lat = std::asin(std::sin(incl) * std::sin(kTwoPi * (j + 0.5) / N));
        if (std::abs(lat) <= alpha) ++inside;
    }
    return static_cast<double>(inside) / N;
}

// ---------------------------------------------------------------------------------------------

void criterion_chain(Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    int checks = 0, observables = 0;
    double worst = -1.0;
    std::string worst_name;
    for (const char* name : {"sphere", "torus"}) {
        const SurfaceModel m = SurfaceModel::from_name(name);
        const GeodesicFlow flow(m);
        const auto family = invariant_family(flow);
        const auto ql = ql_family(flow);
        for (const std::string& d : default_chain_observables(m)) {
            const ChainResult r = run_chain(flow, make_observable(m, d), family, ql);
            ++observables;
            const double v[5] = {r.g2T.value, r.g2.value, r.g2p.value, r.g1pp.value, r.g1p.value};
            for (int i = 0; i < 4; ++i) {
                ++checks;
                const double excess = v[i] - v[i + 1];
                if (excess > worst) {
                    worst = excess;
                    worst_name = std::string(name) + " " + d;
                }
                o.require(r.checks[static_cast<std::size_t>(i)].pass,
                          std::string(name) + " " + d + ": " + r.checks[static_cast<std::size_t>(i)].name + " excess " + num(excess));
            }
        }
    }
    const double secs = elapsed_since(t0);
    o.require(secs <= 300.0, "runtime " + num(secs) + "s > 300s");
    if (o.pass) {
        o.detail << observables << " observables, " << checks << " inequalities, worst excess " << num(worst) << " ("
                 << worst_name << ")";
    }
}

void criterion_g1_g1prime(Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const SurfaceModel s = SurfaceModel::sphere(), t = SurfaceModel::torus();
    const GeodesicFlow fs(s), ft(t);
    const SpectrumTable ts = eigenbasis(s, 20.0), tt = eigenbasis(t, 10.0);
    const auto qs = ql_family(fs), qt = ql_family(ft);
    double worst = -1.0;
    int n = 0;
    for (const char* d : {"cap(lat>=0)", "cap(lat>=pi/4)", "band(|lat|<=pi/6)", "cap(lat<=-pi/6)"}) {
        const Region w = make_region(s, d);
        const double a = g1(ts, w).value, b = g1_prime(fs, w, qs).value;
        worst = std::max(worst, a - b);
        o.require(a <= b + 1e-3, std::string("sphere ") + d + ": g1 " + num(a) + " > g1' " + num(b));
        ++n;
    }
    for (const char* d : {"strip[0,1]", "strip[0,2,x2]", "ctube(vline(pi),0.5)", "complement(strip(1,3))"}) {
        const Region w = make_region(t, d);
        const double a = g1(tt, w).value, b = g1_prime(ft, w, qt).value;
        worst = std::max(worst, a - b);
        o.require(a <= b + 1e-3, std::string("torus ") + d + ": g1 " + num(a) + " > g1' " + num(b));
        ++n;
    }
    const Region open = make_region(s, "cap(lat>0)");
    const double g1o = g1(ts, open).value, g1po = g1_prime(fs, open, qs).value;
    o.require(std::abs(g1o - 0.5) <= 1e-4, "open hemisphere g1 " + num(g1o));
    o.require(std::abs(g1po) <= 1e-12, "open hemisphere g1' " + num(g1po));
    const double secs = elapsed_since(t0);
    o.require(secs <= 120.0, "runtime " + num(secs) + "s > 120s");
    if (o.pass) {
        o.detail << n << " closed regions, max(g1 - g1') " << num(worst) << "; open hemisphere g1 " << num(g1o) << " vs g1' "
                 << num(g1po);
    }
}

void criterion_zoll(Outcome& o) {
    const SurfaceModel s = SurfaceModel::sphere();
    const GeodesicFlow fs(s);
    const auto family = invariant_family(fs);
    double worst_a = 0.0, worst_b = 0.0;
    for (const char* d : {"band(|lat|<=pi/6)", "band(|lat|<=pi/4)", "band(|lat|<pi/3)", "cap(lat>=pi/4)", "cap(lat>=0)",
                          "cap(lat>-pi/6)"}) {
        const ChainResult r = run_chain(fs, Observable::indicator(make_region(s, d)), family, family);
        const double da = std::abs(r.g2T.value - r.g2.value), db = std::abs(r.g2p.value - r.g1pp.value);
        worst_a = std::max(worst_a, da);
        worst_b = std::max(worst_b, db);
        o.require(da <= 2e-3, std::string(d) + ": |g2^2pi - g2| " + num(da));
        o.require(db <= 2e-3, std::string(d) + ": |g2' - g1''| " + num(db));
    }
    G2Options g;
    g.seeds = 3;
    const double T = stabilization_horizon(fs, Observable::indicator(make_region(s, "band(|lat|<=pi/6)")),
                                           PhaseGrid::product(s, 24, 32), 1.5 * kPi, 2.5 * kPi, g);
    o.require(std::abs(T - kTwoPi) <= 0.01 * kTwoPi, "stabilization horizon " + num(T));

    const SurfaceModel t = SurfaceModel::torus();
    const GeodesicFlow ft(t);
    const PhasePoint z = t.make_phase_point(0, {0.1, 0.2}, {1.0, std::sqrt(2.0)});
    const int K = 8;
    const Region w = build_ray_witness(ft, z, K, 0.01);
    const Observable chi = Observable::indicator(w);
    const auto seeds = ray_witness_seeds(ft, z, K);
    G2Options nr;
    nr.refine = false;
    double g2hat = 0.0;
    for (int k = 1; k <= K; ++k) g2hat = std::max(g2hat, g2T(ft, chi, k, PhaseGrid::product(t, 8, 8).with(seeds), nr).value);
    std::vector<double> horizons;
    for (int p = K + 1; p <= 14; ++p) horizons.push_back(std::ldexp(1.0, p));
    double tail = 1.0;
    for (double v : birkhoff_averages(ft, chi, z, horizons)) tail = std::min(tail, v);
    o.require(g2hat <= 1e-3, "torus witness g2 " + num(g2hat));
    o.require(tail >= 0.9, "torus witness tail average " + num(tail));
    if (o.pass) {
        o.detail << "max |g2^2pi - g2| " << num(worst_a) << ", max |g2' - g1''| " << num(worst_b) << ", T* " << num(T)
                 << "; torus K=8: g2 " << num(g2hat) << ", tail min " << num(tail);
    }
}

void criterion_band(Outcome& o) {
    double oracle = 1.0, best = 0.0;
    for (int i = 0; i <= 180; ++i) {
        const double incl = 0.5 * kPi * i / 180.0;
        const double f = band_fraction(incl, kPi / 6);
        if (f < oracle) {
            oracle = f;
            best = incl;
        }
    }
    const SurfaceModel s = SurfaceModel::sphere();
    const GeodesicFlow fs(s);
    const FunctionalReport r = g2T(fs, Observable::indicator(make_region(s, "band(|lat|<=pi/6)")), kTwoPi, PhaseGrid::standard(s));
    const auto [p, v] = s.embed_phase(*r.argmin);
    const double incl = std::acos(std::min(1.0, std::abs(p.cross(v).normalized().z())));
    o.require(std::abs(r.value - 1.0 / 3.0) <= 1e-3, "g2^2pi " + num(r.value));
    o.require(std::abs(r.value - oracle) <= 1e-3, "oracle " + num(oracle) + " vs " + num(r.value));
    o.require(std::abs(incl - kPi / 2) <= 0.02, "inclination " + num(incl));
    if (o.pass) {
        o.detail << "g2^2pi " << num(r.value) << ", oracle " << num(oracle) << " at inclination " << num(best)
                 << ", minimizer inclination " << num(incl);
    }
}

void criterion_hemisphere(Outcome& o) {
    const SurfaceModel s = SurfaceModel::sphere();
    const SpectrumTable t = eigenbasis(s, 30.0);
    const Region hemi = make_region(s, "cap(lat>=0)");
    double worst = 0.0;
    for (const MassMatrix& m : mass_matrices(t, weight_of(hemi))) {
        for (Eigen::Index i = 0; i < m.matrix.rows(); ++i) worst = std::max(worst, std::abs(m.matrix(i, i) - 0.5));
    }
    const double g = g1(t, hemi).value;
    o.require(worst <= 1e-6, "max diagonal deviation " + num(worst));
    o.require(std::abs(g - 0.5) <= 1e-6, "g1 " + num(g));
    if (o.pass) o.detail << "l <= 30: max |diag - 0.5| " << num(worst) << ", g1 " << num(g);
}

void criterion_detector(Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const ZollVerdict sv = detect_zoll(model_spectrum("sphere", 60));
    o.require(sv.verdict == Verdict::ZollConsistent, "sphere verdict " + std::string(to_string(sv.verdict)));
    o.require(std::abs(sv.net.period - kTwoPi) <= 0.01 * kTwoPi, "sphere T " + num(sv.net.period));
    o.require(std::abs(sv.net.sigma - 0.5) <= 0.02, "sphere sigma " + num(sv.net.sigma));
    o.require(sv.net.max_residual <= 0.023, "sphere residual " + num(sv.net.max_residual));
    const ZollVerdict tv = detect_zoll(model_spectrum("torus", 40));
    o.require(tv.verdict == Verdict::NotZollConsistent, "torus verdict " + std::string(to_string(tv.verdict)));
    const UlfResult u = ulf_test(model_spectrum("torus", 40), 0.5, 5);
    o.require(!u.flag, "torus ULF(0.5, 5) holds");
    o.require(tv.histogram.covered_fraction >= 0.8, "torus coverage " + num(tv.histogram.covered_fraction));
    const double secs = elapsed_since(t0);
    o.require(secs <= 30.0, "runtime " + num(secs));
    if (o.pass) {
        o.detail << "sphere T " << num(sv.net.period) << ", sigma " << num(sv.net.sigma) << ", residual "
                 << num(sv.net.max_residual) << "; torus " << to_string(tv.verdict) << ", ULF worst " << u.worst_count
                 << ", coverage " << num(tv.histogram.covered_fraction);
    }
}

void criterion_observability(Outcome& o) {
    const SurfaceModel s = SurfaceModel::sphere();
    const GeodesicFlow fs(s);
    const SpectrumTable t = eigenbasis(s, 12.0);
    const Region closed = make_region(s, "cap(lat>=pi/4)"), open = make_region(s, "cap(lat>pi/4)");
    const double g1v = g1(t, closed).value;
    const double g2o = g2(fs, Observable::indicator(open), PhaseGrid::standard(s)).value;
    const double g2c = g2(fs, Observable::indicator(closed), PhaseGrid::standard(s)).value;
    const SandwichBracket b = sandwich_bracket(g1v, g2o, g2c);
    const Eigen::MatrixXd gram = gramian_base(t, weight_of(closed));
    std::ostringstream vals;
    for (double T : {kTwoPi, 2 * kTwoPi, 4 * kTwoPi}) {
        const double C = observability_constant(build_gramian(t, gram, T));
        vals << " " << num(C);
        o.require(C >= b.low - 5e-2 && C <= b.high + 5e-2, "C_T " + num(C) + " outside [" + num(b.low) + ", " + num(b.high) + "]");
    }
    const double full = observability_constant(build_gramian(t, Region::full(s), kTwoPi));
    o.require(std::abs(full - 1.0) <= 1e-10, "C_T(M) " + num(full));
    if (o.pass) {
        o.detail << "bracket [" << num(b.low) << ", " << num(b.high) << "], C_T at 2pi,4pi,8pi:" << vals.str() << "; C_T(M) - 1 = "
                 << num(full - 1.0);
    }
}

void criterion_norm(Outcome& o) {
    const SurfaceModel s = SurfaceModel::sphere();
    const SpectrumTable t = eigenbasis(s, 12.0);
    const BaseWeight w = weight_of(make_region(s, "cap(lat>=0)"));
    const NormProbe p = norm_convergence_probe(t, w, {4 * kPi, 8 * kPi, 16 * kPi, 32 * kPi});
    const double ainf = observability_constant(build_gramian(t, w, kInfiniteHorizon));
    const double g = g1(t, w).value;
    o.require(p.slope >= -1.25 && p.slope <= -0.75, "log-log slope " + num(p.slope) + " outside [-1.25, -0.75]");
    o.require(std::abs(ainf - g) <= 1e-8, "A_inf min " + num(ainf) + " vs g1 " + num(g));
    std::ostringstream norms;
    for (double n : p.norms) norms << " " << num(n);
    if (o.pass) o.detail << "slope " << num(p.slope) << ";";
    o.detail << " norms:" << norms.str() << "; A_inf min - g1 = " << num(ainf - g);
}

void criterion_mv(Outcome& o) {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> gap(1.0, 3.0), unif(-1.0, 1.0);
    std::uniform_int_distribution<int> size(2, 60);
    int violations = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = size(rng);
        std::vector<double> lambdas(static_cast<std::size_t>(n));
        double x = unif(rng) * 5.0;
        for (double& l : lambdas) {
            l = x;
            x += gap(rng);
        }
        Eigen::VectorXcd a(n), b(n);
        for (int i = 0; i < n; ++i) {
            a[i] = {unif(rng), unif(rng)};
            b[i] = {unif(rng), unif(rng)};
        }
        const MVCheck c = mv_bilinear_check(lambdas, 1.0, a, b);
        worst = std::max(worst, c.lhs / c.bound);
        if (!c.ok || !(c.lhs <= kPi * a.norm() * b.norm())) ++violations;
    }
    o.require(violations == 0, std::to_string(violations) + " violations");
    if (o.pass) o.detail << "100 trials, 0 violations, max lhs/bound " << num(worst);
}

void criterion_coherent(Outcome& o) {
    CoherentState base;
    base.x0 = {0.3, -0.2};
    base.xi0 = {1.0, 0.5};
    const std::vector<std::pair<std::string, ChartSymbol>> symbols{
        {"cos(x1+2x2)", [](Vec2 x, Vec2) { return std::cos(x[0] + 2 * x[1]); }},
        {"exp(-|x|^2)(1+xi1)", [](Vec2 x, Vec2 xi) { return std::exp(-(x[0] * x[0] + x[1] * x[1])) * (1 + xi[0]); }},
        {"sin(xi1)+x2^2", [](Vec2 x, Vec2 xi) { return std::sin(xi[0]) + x[1] * x[1]; }},
        {"x1 xi1", [](Vec2 x, Vec2 xi) { return x[0] * xi[0]; }},
        {"1/(1+|x|^2+|xi|^2)",
         [](Vec2 x, Vec2 xi) { return 1.0 / (1.0 + x[0] * x[0] + x[1] * x[1] + xi[0] * xi[0] + xi[1] * xi[1]); }},
    };
    std::ostringstream errs;
    for (const auto& [name, a] : symbols) {
        double prev = 1e300;
        errs << " " << name << ":";
        for (double k : {1e2, 1e3, 1e4}) {
            CoherentState st = base;
            st.k = k;
            const double err = std::abs(coherent_pairing(st, a) - a(st.x0, st.xi0));
            errs << " " << num(err);
            o.require(err < prev, name + " error not decreasing at k=" + num(k));
            prev = err;
        }
    }
    double one_dev = 0.0;
    for (double k : {1e2, 1e3, 1e4}) {
        CoherentState st = base;
        st.k = k;
        one_dev = std::max(one_dev, std::abs(coherent_pairing(st, [](Vec2, Vec2) { return 1.0; }) - 1.0));
    }
    o.require(one_dev <= 1e-8, "a = 1 pairing deviation " + num(one_dev));

    CoherentState beam_state;
    beam_state.x0 = {0.0, 0.0};
    beam_state.xi0 = {1.0, 0.0};
    beam_state.k = 400.0;
    const SphereBeam beam(beam_state);
    double min_mass = 1.0, unit_dev = 0.0;
    for (int i = 0; i <= 8; ++i) {
        const auto snap = beam.snapshot(kPi * i / 8, 0.3);
        min_mass = std::min(min_mass, snap.tube_mass);
        unit_dev = std::max(unit_dev, std::abs(snap.total_mass - 1.0));
    }
    o.require(min_mass >= 0.9, "beam tube mass " + num(min_mass));
    o.require(unit_dev <= 1e-8, "unitarity deviation " + num(unit_dev));
    if (o.pass) {
        o.detail << "errors at k=1e2,1e3,1e4:" << errs.str() << "; |pairing(1) - 1| " << num(one_dev) << "; beam min tube mass "
                 << num(min_mass) << ", unitarity dev " << num(unit_dev);
    }
}

void criterion_decomposition(Outcome& o) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const SurfaceModel s = SurfaceModel::sphere(), t = SurfaceModel::torus();
    const GeodesicFlow fs(s), ft(t);
    const auto fam_s = invariant_family(fs, {.sphere_normals = 40});
    const auto fam_t = invariant_family(ft);
    std::vector<BaseWeight> tests_s, tests_t;
    for (int i = 0; i < 10; ++i) {
        const double a = 0.5 + 0.3 * i, b = 0.2 * i;
        tests_s.push_back({"f" + std::to_string(i), [s, a, b](const ChartPoint& x) {
                               const Vec3 p = s.embed(x);
                               return std::cos(a * p.x() + b) + p.z() * p.y() * a;
                           }, {}});
        tests_t.push_back({"f" + std::to_string(i), [a, b, i](const ChartPoint& x) {
                               return std::sin((1 + i % 3) * x.x[0] + b) * std::cos(x.x[1] - a);
                           }, {}});
    }
    double weight_err = 0.0, push_err = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const bool sphere = trial % 2 == 0;
        const GeodesicFlow& flow = sphere ? fs : ft;
        const auto& fam = sphere ? fam_s : fam_t;
        std::vector<std::size_t> diracs;
        for (std::size_t i = 0; i < fam.size(); ++i) {
            if (fam[i].is_dirac()) diracs.push_back(i);
        }
        const std::size_t gi = diracs[static_cast<std::size_t>(unif(rng) * diracs.size())];
        const auto& gamma = std::get<DiracOrbit>(fam[gi].variant());
        const double a = 0.05 + 0.9 * unif(rng);
        std::vector<double> w{a};
        std::vector<InvariantMeasure> parts{fam[gi]};
        const int extra = 1 + static_cast<int>(unif(rng) * 4);
        std::vector<double> raw;
        for (int e = 0; e < extra; ++e) {
            std::size_t j = gi;
            while (j == gi) j = static_cast<std::size_t>(unif(rng) * fam.size());
            parts.push_back(fam[j]);
            raw.push_back(unif(rng) + 0.1);
        }
        double sum = 0.0;
        for (double r : raw) sum += r;
        for (double r : raw) w.push_back((1.0 - a) * r / sum);
        const InvariantMeasure mu = InvariantMeasure::mixture(w, parts);
        const Decomposition d = decompose_along(flow, mu, PeriodicOrbit{gamma.start, gamma.period, 0.0});
        weight_err = std::max(weight_err, std::abs(d.weight - a));
        const InvariantMeasure dg = InvariantMeasure::dirac(gamma.start, gamma.period);
        for (const BaseWeight& f : sphere ? tests_s : tests_t) {
            const double lhs = pushforward_eval(flow, mu, f);
            const double rhs = pushforward_eval(flow, d.remainder, f) + d.weight * pushforward_eval(flow, dg, f);
            push_err = std::max(push_err, std::abs(lhs - rhs));
        }
    }
    o.require(weight_err <= 1e-12, "weight error " + num(weight_err));
    o.require(push_err <= 1e-8, "pushforward error " + num(push_err));
    if (o.pass) o.detail << "50 mixtures: max weight error " << num(weight_err) << ", max pushforward error " << num(push_err);
}

void criterion_mollifier(Outcome& o) {
    const std::vector<int> ks{1, 2, 4, 8, 16, 32};
    std::ostringstream info;
    // Open sets: g2^T(h_k) increases toward g2^T(omega).
    for (const auto& [model, desc] : std::vector<std::pair<std::string, std::string>>{{"sphere", "cap(lat>-pi/6)"},
                                                                                       {"torus", "strip(0,1)"}}) {
        const SurfaceModel m = SurfaceModel::from_name(model);
        const GeodesicFlow flow(m);
        const Region w = make_region(m, desc);
        const PhaseGrid grid = PhaseGrid::standard(m);
        const double limit = g2T(flow, Observable::indicator(w), kTwoPi, grid).value;
        double prev = -1.0, last = 0.0;
        for (int k : ks) {
            const double v = g2T(flow, mollifier(w, k), kTwoPi, grid).value;
            o.require(v >= prev - 1e-9, model + " " + desc + " g2T not monotone at k=" + std::to_string(k));
            o.require(v <= limit + 1e-9, model + " " + desc + " g2T above limit at k=" + std::to_string(k));
            prev = last = v;
        }
        o.require(limit - last <= 5e-3, model + " " + desc + " gap at k=32 " + num(limit - last));
        info << model << " " << desc << " g2T gap " << num(limit - last) << "; ";
    }
    // Closed sets: g1(h_k) decreases toward g1(closure).
    for (const auto& [model, desc] : std::vector<std::pair<std::string, std::string>>{{"sphere", "cap(lat>=pi/6)"},
                                                                                       {"torus", "strip[0,1]"}}) {
        const SurfaceModel m = SurfaceModel::from_name(model);
        const SpectrumTable t = eigenbasis(m, m.kind() == SurfaceKind::Sphere ? 8.0 : 5.0);
        const Region w = make_region(m, desc);
        const double limit = g1(t, w).value;
        double prev = 2.0, last = 0.0;
        for (int k : ks) {
            const double v = g1(t, mollifier(w, k)).value;
            o.require(v <= prev + 1e-9, model + " " + desc + " g1 not monotone at k=" + std::to_string(k));
            o.require(v >= limit - 1e-9, model + " " + desc + " g1 below limit at k=" + std::to_string(k));
            prev = last = v;
        }
        o.require(last - limit <= 5e-3, model + " " + desc + " gap at k=32 " + num(last - limit));
        info << model << " " << desc << " g1 gap " << num(last - limit) << "; ";
    }
    if (o.pass) o.detail << info.str();
}

}  // namespace

int main() {
    run(1, "inequality chain g2T <= g2 <= g2' <= g1'' <= g1'", criterion_chain);
    run(2, "g1 <= g1' on closed regions, open-hemisphere counterexample", criterion_g1_g1prime);
    run(3, "Zoll functional equalities and torus witness", criterion_zoll);
    run(4, "sphere band closed form", criterion_band);
    run(5, "hemisphere mass matrices", criterion_hemisphere);
    run(6, "Zoll detector", criterion_detector);
    run(7, "observability sandwich", criterion_observability);
    run(8, "norm convergence under gap", criterion_norm);
    run(9, "Montgomery-Vaughan bilinear bound", criterion_mv);
    run(10, "coherent states", criterion_coherent);
    run(11, "decomposition along a periodic orbit", criterion_decomposition);
    run(12, "mollifier limits", criterion_mollifier);
    std::printf("%d of 12 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
