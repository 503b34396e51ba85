#include "zoll/suites.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include "zoll/coherent.hpp"
#include "zoll/detector.hpp"
#include "zoll/errors.hpp"
#include "zoll/gramian.hpp"

namespace zoll {

// ---------------------------------------------------------------------------------------------
// Observables

Observable smooth_observable(const SurfaceModel& model, int index) {
    if (index < 0 || index > 9) throw PreconditionError("smooth observable index must be in 0..9");
    const double a = 0.4 + 0.15 * index, b = 1.1 - 0.07 * index, c = 0.3 * index;
    const std::string label = "smooth(" + std::to_string(index) + ")";
    const bool phase = index < 5;
    if (model.kind() == SurfaceKind::Sphere) {
        if (phase) {
            return Observable::smooth_symbol(
                label,
                [model, a, b, c](const PhasePoint& z) {
                    const auto [p, v] = model.embed_phase(z);
                    return 1.0 + 0.3 * std::sin(a * p.x() + b * v.y() + c) + 0.2 * p.z() * v.x();
                },
                0.5, 1.5);
        }
        return Observable::pullback(
            label,
            [model, a, b, c](const ChartPoint& x) {
                const Vec3 p = model.embed(x);
                return 1.0 + 0.4 * std::sin(a * p.z() + b * p.x() + c) * std::cos(p.y());
            },
            0.6, 1.4);
    }
    if (model.kind() == SurfaceKind::Torus) {
        const int p1 = 1 + index % 3, p2 = index % 2;
        if (phase) {
            return Observable::smooth_symbol(
                label,
                [a, b, c, p1, p2](const PhasePoint& z) {
                    return 1.0 + 0.3 * std::sin(p1 * z.x[0] + a * z.xi[1] + c) +
                           0.2 * std::cos(z.x[1] - p2 * z.x[0] - b * z.xi[0]);
                },
                0.5, 1.5);
        }
        return Observable::pullback(
            label,
            [b, c, p1, p2](const ChartPoint& x) {
                return 1.0 + 0.4 * std::cos(p1 * x.x[0] + (p2 + 1) * x.x[1] + c) * (0.5 + 0.5 * std::sin(b + x.x[1]));
            },
            0.6, 1.4);
    }
    // Revolution surfaces: functions of the canonical coordinates and the covector angle.
    return Observable::smooth_symbol(
        label,
        [model, a, c](const PhasePoint& z) {
            const Vec2 uv = model.canonical(z.base());
            return 1.0 + 0.3 * std::sin(a * uv[0] + c) * std::cos(uv[1]) + 0.2 * std::cos(model.direction_angle(z));
        },
        0.5, 1.5);
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

// Splits `name(args)` into name and the raw argument text.
bool call_form(std::string_view d, std::string& name, std::string& args) {
    const auto open = d.find('(');
    if (open == std::string_view::npos || d.back() != ')') return false;
    name = trim(d.substr(0, open));
    args = std::string(d.substr(open + 1, d.size() - open - 2));
    return true;
}

}  // namespace

Observable make_observable(const SurfaceModel& model, std::string_view descriptor) {
    const std::string d = trim(descriptor);
    std::string name, args;
    if (!call_form(d, name, args)) throw ParseError("expected name(arguments) in '" + d + "'", "observable");
    if (name == "indicator") return Observable::indicator(make_region(model, args));
    if (name == "mollifier") {
        int depth = 0;
        std::size_t split = std::string::npos;
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (args[i] == '(' || args[i] == '[') ++depth;
            if (args[i] == ')' || args[i] == ']') --depth;
            if (args[i] == ',' && depth == 0) split = i;
        }
        if (split == std::string::npos) throw ParseError("mollifier needs (region, k) in '" + d + "'", "observable");
        const double k = parse_number(args.substr(split + 1));
        if (k < 1 || k != std::floor(k)) throw ParseError("mollifier index must be a positive integer", "observable");
        return mollifier(make_region(model, args.substr(0, split)), static_cast<int>(k));
    }
    if (name == "smooth") {
        const double i = parse_number(args);
        if (i < 0 || i > 9 || i != std::floor(i)) throw ParseError("smooth index must be 0..9", "observable");
        return smooth_observable(model, static_cast<int>(i));
    }
    if (name == "const") return Observable::constant(parse_number(args));
    throw ParseError("unknown observable '" + name + "'", "observable");
}

std::string interior_descriptor(std::string_view descriptor) {
    std::string s(descriptor);
    auto replace_all = [&](const std::string& from, const std::string& to) {
        for (std::size_t p = s.find(from); p != std::string::npos; p = s.find(from, p + to.size())) s.replace(p, from.size(), to);
    };
    replace_all(">=", ">");
    replace_all("<=", "<");
    replace_all("ctube(", "tube(");
    if (s.rfind("strip[", 0) == 0 && s.back() == ']') s = "strip(" + s.substr(6, s.size() - 7) + ")";
    return s;
}

std::vector<std::string> default_chain_observables(const SurfaceModel& model) {
    std::vector<std::string> out;
    for (int i = 0; i < 10; ++i) out.push_back("smooth(" + std::to_string(i) + ")");
    if (model.kind() == SurfaceKind::Sphere) {
        for (const char* d : {"mollifier(cap(lat>=pi/4),8)", "mollifier(cap(lat>-pi/6),8)", "mollifier(band(|lat|<=pi/6),8)",
                              "mollifier(band(|lat|<pi/4),4)", "mollifier(cap(lat<=0.3),16)", "mollifier(cap(lat>0),4)",
                              "mollifier(band(|lat|<=pi/3),16)", "mollifier(tube(equator,0.4),8)",
                              "mollifier(tube(meridian(0),0.5),4)", "mollifier(union(cap(lat>=pi/3),cap(lat<=-pi/3)),8)"}) {
            out.push_back(d);
        }
    } else {
        for (const char* d : {"mollifier(strip(0,1),8)", "mollifier(strip[0,2],8)", "mollifier(strip(1,2.5,x2),4)",
                              "mollifier(strip[0.5,4,x2],16)", "mollifier(tube(vline(pi),0.6),8)",
                              "mollifier(tube(hline(1),0.4),4)", "mollifier(tube(seg(1,1,0.7,3),0.5),8)",
                              "mollifier(union(strip(0,1),strip(3,4,x2)),8)", "mollifier(strip(2,5),16)",
                              "mollifier(complement(strip[0,1]),4)"}) {
            out.push_back(d);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------------------------
// Checks and reports

Check check(std::string name, double lhs, std::string relation, double rhs, double tol) {
    Check c{std::move(name), std::move(relation), lhs, rhs, tol, false};
    if (c.relation != "<=" && c.relation != ">=" && c.relation != "~") throw PreconditionError("unknown relation " + c.relation);
    c.pass = recheck(c);
    return c;
}

bool recheck(const Check& c) {
    if (c.relation == "<=") return c.lhs <= c.rhs + c.tol;
    if (c.relation == ">=") return c.lhs >= c.rhs - c.tol;
    return std::abs(c.lhs - c.rhs) <= c.tol;
}

bool RunReport::passed() const {
    for (const Check& c : checks) {
        if (!c.pass) return false;
    }
    return true;
}

json to_json(const RunReport& r) {
    json j = document("run_report");
    j["suite"] = r.suite;
    j["model"] = r.model;
    j["passed"] = r.passed();
    j["provenance"] = {{"config_hash", r.config_hash}, {"version", kVersion}, {"timestamp", r.timestamp}};
    json checks = json::array();
    for (const Check& c : r.checks) {
        checks.push_back({{"name", c.name}, {"lhs", c.lhs}, {"relation", c.relation}, {"rhs", c.rhs}, {"tol", c.tol}, {"pass", c.pass}});
    }
    j["checks"] = checks;
    json reports = json::array();
    for (const auto& [k, rep] : r.reports) {
        json e = to_json(rep);
        e["key"] = k;
        reports.push_back(e);
    }
    j["reports"] = reports;
    json records = json::object();
    for (const auto& [k, v] : r.records) records[k] = v;
    j["records"] = records;
    json series = json::array();
    for (const Series& s : r.series) series.push_back({{"name", s.name}, {"columns", s.columns}, {"file", s.name + ".csv"}});
    j["series"] = series;
    j["warnings"] = r.warnings;
    return j;
}

void write_report(const RunReport& report, const std::filesystem::path& out) {
    std::filesystem::create_directories(out);
    write_json(out / "report.json", to_json(report));
    for (const Series& s : report.series) write_csv(out / (s.name + ".csv"), s.columns, s.rows);
}

std::string utc_timestamp() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// ---------------------------------------------------------------------------------------------
// Inequality chain

namespace {

std::vector<PhasePoint> seeds_from(const GeodesicFlow& flow, const InvariantMeasure& mu, const Observable& a,
                                   const BirkhoffOptions& birkhoff) {
    const SurfaceModel& m = flow.model();
    std::vector<PhasePoint> out;
    for (const auto& [w, atom] : mu.atoms()) {
        if (const auto* d = std::get_if<DiracOrbit>(&atom.variant())) {
            out.push_back(aligned_start(flow, *d, a, 512, birkhoff));
        } else if (const auto* t = std::get_if<TorusDirection>(&atom.variant())) {
            for (int i = 0; i < 4; ++i) {
                for (int j = 0; j < 4; ++j) {
                    const ChartPoint x{0, {kTwoPi * (i + 0.5) / 4, kTwoPi * (j + 0.5) / 4}};
                    out.push_back(m.phase_point_from_angle(x, t->angle));
                    if (t->symmetric) out.push_back(m.phase_point_from_angle(x, t->angle + kPi));
                }
            }
        }
    }
    return out;
}

}  // namespace

ChainResult run_chain(const GeodesicFlow& flow, const Observable& a, const std::vector<InvariantMeasure>& family,
                      const std::vector<InvariantMeasure>& ql, const ChainOptions& options) {
    ChainResult res;
    res.observable = a.label();
    res.g1pp = g1_second(flow, a, family, options.eval);
    std::vector<PhasePoint> seeds;
    if (res.g1pp.grid_index) {
        seeds = seeds_from(flow, family[static_cast<std::size_t>(*res.g1pp.grid_index)], a, options.g2.birkhoff);
    }
    const PhaseGrid base = PhaseGrid::product(flow.model(), options.grid_base, options.grid_directions);

    DoublingOptions schedule;
    schedule.K = options.doublings;
    const double TK = schedule.T0 * std::ldexp(1.0, schedule.K);
    res.g2p = g2prime(flow, a, base.with(seeds), multiples(TK, options.tail_count), options.tail);

    std::vector<PhasePoint> seeds2 = seeds;
    if (res.g2p.argmin) seeds2.push_back(*res.g2p.argmin);
    res.g2 = g2(flow, a, base.with(seeds2), schedule, options.g2);

    res.g2T = res.g2;
    res.g2T.functional = "g2T";
    res.g2T.value = res.g2.trace.front().value;
    res.g2T.trace = {res.g2.trace.front()};
    res.g2T.tag = EstimateTag::UpperBound;
    res.g2T.notes = {"first horizon of the doubling run"};
    res.g2T.meta = {{"T", res.g2.trace.front().parameter}};

    res.g1p = g1_prime(flow, a, ql, options.eval);

    const double s = options.slack;
    res.checks.push_back(check("g2T <= g2", res.g2T.value, "<=", res.g2.value, s));
    res.checks.push_back(check("g2 <= g2'", res.g2.value, "<=", res.g2p.value, s));
    res.checks.push_back(check("g2' <= g1''", res.g2p.value, "<=", res.g1pp.value, s));
    res.checks.push_back(check("g1'' <= g1'", res.g1pp.value, "<=", res.g1p.value, s));
    return res;
}

// ---------------------------------------------------------------------------------------------
// Suites

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"chain",       "zoll-equalities", "sphere-ql", "torus-witness",
                                                "observability", "detector",      "coherent"};
    return names;
}

namespace {

SurfaceModel config_model(const Config& c, const std::string& fallback) {
    const std::string name = c.get_string("model.kind", fallback);
    try {
        return SurfaceModel::from_name(name);
    } catch (const Error&) {
        throw ParseError("unknown model '" + name + "'", "model.kind");
    }
}

Region config_region(const Config& c, const SurfaceModel& m, const std::string& key, const std::string& text) {
    try {
        return make_region(m, text);
    } catch (const ParseError& e) {
        throw ParseError(std::string(e.what()) + " (config " + c.source() + ":" + std::to_string(c.line_of(key)) + ")", key);
    }
}

Observable config_observable(const Config& c, const SurfaceModel& m, const std::string& key, const std::string& text) {
    try {
        return make_observable(m, text);
    } catch (const ParseError& e) {
        throw ParseError(std::string(e.what()) + " (config " + c.source() + ":" + std::to_string(c.line_of(key)) + ")", key);
    }
}

std::vector<std::string> list_or(const Config& c, const std::string& key, std::vector<std::string> fallback) {
    auto v = c.get_list(key);
    return v.empty() ? fallback : v;
}

std::vector<double> doubles_or(const Config& c, const std::string& key, std::vector<double> fallback) {
    auto v = c.get_doubles(key);
    return v.empty() ? fallback : v;
}

Vec2 pair_of(const Config& c, const std::string& key, Vec2 fallback) {
    const auto v = c.get_doubles(key);
    if (v.empty()) return fallback;
    if (v.size() != 2) throw ParseError("expected two numbers", key);
    return {v[0], v[1]};
}

ChainOptions chain_options(const Config& c) {
    ChainOptions o;
    o.grid_base = c.get_int("chain.grid_base", o.grid_base);
    o.grid_directions = c.get_int("chain.grid_directions", o.grid_directions);
    o.doublings = c.get_int("chain.doublings", o.doublings);
    o.tail_count = c.get_int("chain.tail_count", o.tail_count);
    o.slack = c.get_double("chain.slack", o.slack);
    if (o.grid_base < 1 || o.grid_directions < 1) throw ParseError("grid sizes must be positive", "chain.grid_base");
    if (o.doublings < 2) throw ParseError("need at least 2 doublings", "chain.doublings");
    return o;
}

void add_functional(RunReport& r, const std::string& key, const FunctionalReport& f) { r.reports.emplace_back(key, f); }

int worker_count(const Config& c) {
    const int hw = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    const int n = c.get_int("run.jobs", hw);
    if (n < 1) throw ParseError("need at least one worker", "run.jobs");
    return n;
}

// Runs job(0..n-1) on a pool of workers; results come back in index order and the first
// failing job's exception is rethrown.
template <class F>
auto run_jobs(std::size_t n, int workers, F job) {
    using R = decltype(job(std::size_t{0}));
    std::vector<std::optional<R>> results(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                results[i].emplace(job(i));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t extra = std::min<std::size_t>(n, static_cast<std::size_t>(workers)) - (n > 0 ? 1 : 0);
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < extra; ++t) pool.emplace_back(work);
    work();
    for (std::thread& t : pool) t.join();
    std::vector<R> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (errors[i]) std::rethrow_exception(errors[i]);
        out.push_back(std::move(*results[i]));
    }
    return out;
}

RunReport suite_chain(const Config& c) {
    RunReport r;
    const SurfaceModel m = config_model(c, "sphere");
    r.model = m.name();
    const GeodesicFlow flow(m);
    const ChainOptions opt = chain_options(c);
    const auto family = invariant_family(flow);
    const auto ql = ql_family(flow);
    Series s{"chain", {"index", "g2T", "g2", "g2prime", "g1pp", "g1p"}, {}, "line", "inequality chain per observable"};
    Series traces{"g2_traces", {"T"}, {}, "line", "doubling traces g2^T"};
    const auto observables = list_or(c, "chain.observables", default_chain_observables(m));
    std::vector<std::vector<double>> trace_cols;
    std::vector<double> horizons;
    std::vector<Observable> parsed;
    for (const std::string& d : observables) parsed.push_back(config_observable(c, m, "chain.observables", d));
    const auto results =
        run_jobs(parsed.size(), worker_count(c), [&](std::size_t i) { return run_chain(flow, parsed[i], family, ql, opt); });
    for (std::size_t i = 0; i < observables.size(); ++i) {
        const ChainResult& cr = results[i];
        const std::string p = "[" + cr.observable + "] ";
        for (Check ck : cr.checks) {
            ck.name = p + ck.name;
            r.checks.push_back(ck);
        }
        add_functional(r, p + "g2T", cr.g2T);
        add_functional(r, p + "g2", cr.g2);
        add_functional(r, p + "g2prime", cr.g2p);
        add_functional(r, p + "g1pp", cr.g1pp);
        add_functional(r, p + "g1p", cr.g1p);
        s.rows.push_back({static_cast<double>(i), cr.g2T.value, cr.g2.value, cr.g2p.value, cr.g1pp.value, cr.g1p.value});
        if (cr.g2.trace.size() == static_cast<std::size_t>(opt.doublings + 1)) {
            if (horizons.empty()) {
                for (const auto& t : cr.g2.trace) horizons.push_back(t.parameter);
            }
            std::vector<double> col;
            for (const auto& t : cr.g2.trace) col.push_back(t.value);
            trace_cols.push_back(col);
            traces.columns.push_back("obs" + std::to_string(i));
        }
    }
    for (std::size_t k = 0; k < horizons.size(); ++k) {
        std::vector<double> row{horizons[k]};
        for (const auto& col : trace_cols) row.push_back(col[k]);
        traces.rows.push_back(row);
    }
    r.series.push_back(s);
    if (!trace_cols.empty()) r.series.push_back(traces);
    return r;
}

RunReport suite_zoll(const Config& c) {
    RunReport r;
    const SurfaceModel m = config_model(c, "sphere");
    if (m.kind() != SurfaceKind::Sphere) throw ParseError("zoll-equalities runs on the sphere", "model.kind");
    r.model = m.name();
    const GeodesicFlow flow(m);
    ChainOptions opt = chain_options(c);
    const double tol = c.get_double("zoll.tol", 2e-3);
    const auto family = invariant_family(flow);
    const auto regions =
        list_or(c, "zoll.regions",
                {"band(|lat|<=pi/6)", "band(|lat|<=pi/4)", "band(|lat|<pi/3)", "cap(lat>=pi/4)", "cap(lat>=0)", "cap(lat>-pi/6)"});
    Series s{"zoll_equalities", {"index", "g2_2pi", "g2", "g2prime", "g1pp"}, {}, "line", "sphere functionals"};
    std::vector<Region> parsed;
    for (const std::string& d : regions) parsed.push_back(config_region(c, m, "zoll.regions", d));
    const auto results = run_jobs(parsed.size(), worker_count(c), [&](std::size_t i) {
        return run_chain(flow, Observable::indicator(parsed[i]), family, family, opt);
    });
    for (std::size_t i = 0; i < regions.size(); ++i) {
        const Region& w = parsed[i];
        const ChainResult& cr = results[i];
        const std::string p = "[" + w.descriptor() + "] ";
        r.checks.push_back(check(p + "g2^2pi = g2", cr.g2T.value, "~", cr.g2.value, tol));
        r.checks.push_back(check(p + "g2' = g1''", cr.g2p.value, "~", cr.g1pp.value, tol));
        add_functional(r, p + "g2^2pi", cr.g2T);
        add_functional(r, p + "g2", cr.g2);
        add_functional(r, p + "g2prime", cr.g2p);
        add_functional(r, p + "g1pp", cr.g1pp);
        s.rows.push_back({static_cast<double>(i), cr.g2T.value, cr.g2.value, cr.g2p.value, cr.g1pp.value});
    }
    r.series.push_back(s);
    const Region w0 = config_region(c, m, "zoll.regions", regions.front());
    G2Options g;
    g.seeds = 3;
    const double T = stabilization_horizon(flow, Observable::indicator(w0), PhaseGrid::product(m, 24, 32),
                                           c.get_double("zoll.horizon_lo", 1.5 * kPi), c.get_double("zoll.horizon_hi", 2.5 * kPi), g);
    r.checks.push_back(check("stabilization horizon = 2pi", T, "~", kTwoPi, 0.01 * kTwoPi));
    r.records.emplace_back("stabilization", json{{"region", w0.descriptor()}, {"T", T}});
    return r;
}

RunReport suite_sphere_ql(const Config& c) {
    RunReport r;
    const SurfaceModel m = SurfaceModel::sphere();
    r.model = m.name();
    const double lmax = c.get_double("sphere-ql.lambda_max", 40.0);
    auto table = std::make_shared<const SpectrumTable>(eigenbasis(m, lmax));
    QLSequenceOptions o;
    o.diameter = c.get_double("sphere-ql.diameter", 0.05);
    o.min_members = c.get_int("sphere-ql.min_members", o.min_members);
    o.lambda_min = c.get_double("sphere-ql.lambda_min", 0.5 * lmax);
    json clusters = json::object();
    for (const std::string& name : list_or(c, "sphere-ql.strategies", {"zonal", "sectoral"})) {
        if (name == "zonal") o.strategy = QLStrategy::Zonal;
        else if (name == "sectoral") o.strategy = QLStrategy::Sectoral;
        else if (name == "basis") o.strategy = QLStrategy::Basis;
        else throw ParseError("unknown strategy '" + name + "'", "sphere-ql.strategies");
        const QLSequenceResult q = ql_from_sequence(table, o);
        json arr = json::array();
        for (const QLCluster& cl : q.clusters) {
            arr.push_back({{"moments", cl.moments}, {"eigenvalues", cl.eigenvalues}, {"representative", to_json(cl.representative)}});
        }
        clusters[name] = {{"dictionary", q.dictionary}, {"clusters", arr}, {"diagnostics", q.diagnostics}};
        r.checks.push_back(check(name + ": stable clusters", static_cast<double>(q.clusters.size()), ">=", 1.0, 0.0));
    }
    r.records.emplace_back("clusters", clusters);
    // Sectoral harmonics concentrate on the equator: their band mass tends to the equator Dirac's.
    const Region band = make_region(m, "band(|lat|<=0.3)");
    const std::size_t top = table->size() - 1;
    const int l = static_cast<int>(top);
    Eigen::VectorXd coeff = Eigen::VectorXd::Zero(table->spaces()[top].multiplicity());
    coeff[2 * l] = 1.0;  // Y(l, l)
    const double mass = region_moments(*table, top, coeff, {band}).front();
    r.checks.push_back(check("sectoral Y(l,l) mass in |lat| <= 0.3", mass, ">=", 0.9, 0.0));
    r.records.emplace_back("sectoral", json{{"l", l}, {"band_mass", mass}});
    return r;
}

RunReport suite_witness(const Config& c) {
    RunReport r;
    const SurfaceModel t = SurfaceModel::torus();
    r.model = t.name();
    const GeodesicFlow flow(t);
    const int K = c.get_int("witness.K", 8);
    const double radius = c.get_double("witness.tube_radius", 0.01);
    const Vec2 x = pair_of(c, "witness.start", {0.1, 0.2});
    const Vec2 dir = pair_of(c, "witness.direction", {1.0, std::sqrt(2.0)});
    const int pmax = c.get_int("witness.tail_max_power", 14);
    const PhasePoint z = t.make_phase_point(0, x, dir);
    const Region w = build_ray_witness(flow, z, K, radius);
    const Observable chi = Observable::indicator(w);
    const auto seeds = ray_witness_seeds(flow, z, K);
    G2Options g;
    g.refine = false;
    std::vector<TracePoint> trace;
    double g2hat = -1.0;
    for (int k = 1; k <= K; ++k) {
        const auto f = g2T(flow, chi, k, PhaseGrid::product(t, 8, 8).with(seeds), g);
        trace.push_back({static_cast<double>(k), f.value});
        g2hat = std::max(g2hat, f.value);
    }
    FunctionalReport fr;
    fr.functional = "g2";
    fr.value = g2hat;
    fr.tag = EstimateTag::UpperBound;
    fr.trace = trace;
    fr.notes.push_back("horizons T = 1..K, each attained along a witness tube");
    add_functional(r, "witness g2", fr);
    std::vector<double> horizons;
    for (int p = K + 1; p <= pmax; ++p) horizons.push_back(std::ldexp(1.0, p));
    const auto av = birkhoff_averages(flow, chi, z, horizons);
    double tail = 1.0;
    Series s{"witness_tail", {"T", "average"}, {}, "line", "running average along the ray"};
    for (std::size_t i = 0; i < horizons.size(); ++i) {
        tail = std::min(tail, av[i]);
        s.rows.push_back({horizons[i], av[i]});
    }
    r.series.push_back(s);
    r.checks.push_back(check("g2 of the witness", g2hat, "<=", c.get_double("witness.g2_max", 1e-3), 0.0));
    r.checks.push_back(check("tail average along the ray", tail, ">=", c.get_double("witness.tail_min", 0.9), 0.0));
    r.records.emplace_back("witness", json{{"K", K}, {"tube_radius", radius}, {"tail_min", tail}});
    return r;
}

RunReport suite_observability(const Config& c) {
    RunReport r;
    const SurfaceModel m = config_model(c, "sphere");
    r.model = m.name();
    const GeodesicFlow flow(m);
    const std::string desc = c.get_string("observability.region", "cap(lat>=pi/4)");
    const std::string open_desc = c.get_string("observability.region_open", interior_descriptor(desc));
    const Region closed = config_region(c, m, "observability.region", desc);
    const Region open = config_region(c, m, "observability.region_open", open_desc);
    const double lmax = c.get_double("observability.lambda_max", 12.0);
    const auto Ts = doubles_or(c, "observability.T_list", {kTwoPi, 2 * kTwoPi, 4 * kTwoPi});
    const double tol = c.get_double("observability.tol", 5e-2);
    const SpectrumTable table = eigenbasis(m, lmax);
    const FunctionalReport g1r = g1(table, closed);
    const PhaseGrid grid = PhaseGrid::standard(m);
    const FunctionalReport g2o = g2(flow, Observable::indicator(open), grid);
    const FunctionalReport g2c = g2(flow, Observable::indicator(closed), grid);
    add_functional(r, "g1", g1r);
    add_functional(r, "g2 open", g2o);
    add_functional(r, "g2 closed", g2c);
    const SandwichBracket b = sandwich_bracket(g1r.value, g2o.value, g2c.value);
    const Eigen::MatrixXd gram = gramian_base(table, weight_of(closed));
    Series s{"observability", {"T", "C_T", "bracket_low", "bracket_high"}, {}, "line", "C_T against T"};
    for (double T : Ts) {
        const double C = observability_constant(build_gramian(table, gram, T));
        s.rows.push_back({T, C, b.low, b.high});
        r.checks.push_back(check("C_T >= low at T=" + format_double(T), C, ">=", b.low, tol));
        r.checks.push_back(check("C_T <= high at T=" + format_double(T), C, "<=", b.high, tol));
    }
    const double full = observability_constant(build_gramian(table, Region::full(m), Ts.front()));
    r.checks.push_back(check("C_T(M) = 1", full, "~", 1.0, 1e-10));
    r.series.push_back(s);
    r.records.emplace_back("observability", json{{"region", desc}, {"region_open", open_desc}, {"lambda_max", lmax}});
    return r;
}

RunReport suite_detector(const Config& c) {
    RunReport r;
    r.model = "spectra";
    const auto models = list_or(c, "detector.models", {"sphere", "torus"});
    const auto bounds = doubles_or(c, "detector.bounds", {60.0, 40.0});
    const auto expect = list_or(c, "detector.expect", {"zoll-consistent", "not-zoll-consistent"});
    if (bounds.size() != models.size()) throw ParseError("one bound per model", "detector.bounds");
    for (std::size_t i = 0; i < models.size(); ++i) {
        std::vector<double> spectrum;
        try {
            spectrum = model_spectrum(models[i], bounds[i]);
        } catch (const Error& e) {
            throw ParseError(e.what(), "detector.models");
        }
        const ZollVerdict v = detect_zoll(spectrum);
        r.records.emplace_back(models[i], to_json(v));
        Series h{"sigma_histogram_" + models[i], {"left_edge", "count"}, {}, "bars", "Sigma histogram (" + models[i] + ")"};
        for (std::size_t k = 0; k < v.histogram.counts.size(); ++k) {
            h.rows.push_back({v.histogram.edges[k], static_cast<double>(v.histogram.counts[k])});
        }
        r.series.push_back(h);
        if (i < expect.size()) {
            const bool ok = std::string(to_string(v.verdict)) == expect[i];
            r.checks.push_back(check(models[i] + ": verdict " + std::string(to_string(v.verdict)) + " expected " + expect[i],
                                     ok ? 1.0 : 0.0, "~", 1.0, 0.0));
        }
    }
    return r;
}

RunReport suite_coherent(const Config& c) {
    RunReport r;
    r.model = "sphere";
    CoherentState st;
    st.k = c.get_double("coherent.k", 400.0);
    st.x0 = pair_of(c, "coherent.center", {0.0, 0.0});
    st.xi0 = pair_of(c, "coherent.direction", {1.0, 0.0});
    const double radius = c.get_double("coherent.tube_r", 0.3);
    const double min_mass = c.get_double("coherent.min_mass", 0.9);
    std::vector<double> ts = c.get_doubles("coherent.t_list");
    if (ts.empty()) {
        for (int i = 0; i <= 8; ++i) ts.push_back(kPi * i / 8);
    }
    const SphereBeam beam(st);
    Series s{"coherent", {"t", "mass_in_tube"}, {}, "line", "beam mass in the tube"};
    for (double t : ts) {
        const auto snap = beam.snapshot(t, radius);
        s.rows.push_back({t, snap.tube_mass});
        r.checks.push_back(check("mass in tube at t=" + format_double(t), snap.tube_mass, ">=", min_mass, 0.0));
        r.checks.push_back(check("unitarity at t=" + format_double(t), snap.total_mass, "~", 1.0, 1e-8));
    }
    r.series.push_back(s);
    r.records.emplace_back("coherent", json{{"k", st.k}, {"center", st.x0}, {"direction", st.xi0}, {"tube_r", radius},
                                            {"degree", beam.degree()}, {"initial_norm_squared", beam.initial_norm_squared()}});
    return r;
}

}  // namespace

RunReport run_suite(const std::string& name, const Config& config, const std::filesystem::path& out) {
    RunReport r;
    if (name == "chain") r = suite_chain(config);
    else if (name == "zoll-equalities") r = suite_zoll(config);
    else if (name == "sphere-ql") r = suite_sphere_ql(config);
    else if (name == "torus-witness") r = suite_witness(config);
    else if (name == "observability") r = suite_observability(config);
    else if (name == "detector") r = suite_detector(config);
    else if (name == "coherent") r = suite_coherent(config);
    else throw ParseError("unknown suite '" + name + "'", "suite");
    r.suite = name;
    r.config_hash = config.hash();
    r.timestamp = utc_timestamp();
    if (!out.empty()) write_report(r, out);
    return r;
}

}  // namespace zoll
