// zoll-lab command line.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "zoll/detector.hpp"
#include "zoll/errors.hpp"
#include "zoll/functionals.hpp"
#include "zoll/io.hpp"
#include "zoll/measures.hpp"
#include "zoll/plots.hpp"
#include "zoll/suites.hpp"

using namespace zoll;

namespace {

constexpr int kPass = 0;
constexpr int kError = 1;
constexpr int kVerdictFail = 2;

struct Common {
    std::string config;
    std::string out;
    std::vector<std::string> overrides;
    bool plots = false;
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--config", c.config, "configuration file");
    app->add_option("--out", c.out, "output directory");
    app->add_option("--set", c.overrides, "override a configuration key (key=value)");
    app->add_flag("--plots", c.plots, "write SVG plots next to the CSV files");
}

Config load_config(const Common& c) {
    Config cfg = c.config.empty() ? Config::parse("", "<defaults>") : Config::load(c.config);
    for (const std::string& kv : c.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ParseError("expected key=value", kv);
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    return cfg;
}

void print_checks(const RunReport& r) {
    for (const Check& c : r.checks) {
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << format_double(c.lhs) << " " << c.relation << " "
                  << format_double(c.rhs) << " (tol " << format_double(c.tol) << ")\n";
    }
    for (const std::string& w : r.warnings) std::cerr << "warning: " << w << "\n";
}

int finish(RunReport r, const Common& c) {
    if (!c.out.empty()) {
        if (c.plots) {
            std::vector<std::string> warnings;
            emit_plots(r, c.out, PlotStyle{}, warnings);
            r.warnings.insert(r.warnings.end(), warnings.begin(), warnings.end());
        }
        write_report(r, c.out);
    }
    print_checks(r);
    std::cout << r.suite << ": " << (r.passed() ? "pass" : "FAIL") << "\n";
    return r.passed() ? kPass : kVerdictFail;
}

// Writes a single JSON document either to a file (path ending in .json) or to <dir>/report.json.
void emit_json(const std::string& out, const json& j) {
    if (out.empty()) {
        std::cout << j.dump(2) << "\n";
        return;
    }
    const std::filesystem::path p(out);
    write_json(p.extension() == ".json" ? p : p / "report.json", j);
}

Observable observable_from(const SurfaceModel& m, const std::string& observable, const std::string& region) {
    if (!observable.empty() && !region.empty()) throw ParseError("give either --observable or --region", "observable");
    if (!observable.empty()) return make_observable(m, observable);
    if (!region.empty()) return Observable::indicator(make_region(m, region));
    throw ParseError("missing --observable or --region", "observable");
}

// A measure file holds either a bare measure object or {"measure": {...}}.
json measure_file(const std::string& path) {
    json j = read_json(path);
    return j.contains("measure") ? j.at("measure") : j;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"zoll-lab: numerical experiments on Zoll functionals"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    // suite
    Common suite_c;
    std::string suite_name;
    auto* suite = app.add_subcommand("suite", "run a named experiment suite");
    suite->add_option("name", suite_name, "suite name")->required()->check(CLI::IsMember(suite_names()));
    add_common(suite, suite_c);

    // functionals
    Common fun_c;
    std::string fun_model = "sphere", fun_obs, fun_region, fun_which = "all";
    std::string fun_T = "2*pi";
    int fun_K = 3;
    std::vector<int> fun_grid{48, 64};
    auto* fun = app.add_subcommand("functionals", "evaluate g2T, g2 and g2' for one observable");
    fun->add_option("--model", fun_model, "sphere, torus or zoll_revolution_demo");
    fun->add_option("--observable", fun_obs, "observable descriptor");
    fun->add_option("--region", fun_region, "region descriptor (indicator observable)");
    fun->add_option("--T", fun_T, "horizon for g2T, e.g. 2*pi");
    fun->add_option("--doublings", fun_K, "doubling count K for g2");
    fun->add_option("--grid", fun_grid, "base points and directions")->expected(2);
    fun->add_option("--functional", fun_which, "g2T, g2, g2prime or all")
        ->check(CLI::IsMember({"g2T", "g2", "g2prime", "all"}));
    add_common(fun, fun_c);

    // measures
    Common mea_c;
    std::string mea_op, mea_model = "sphere", mea_measure, mea_obs, mea_region, mea_orbit;
    double mea_lmax = 10.0, mea_tol = 1e-6;
    auto* mea = app.add_subcommand("measures", "invariant measures: eval, g1, g1pp, g1p, decompose");
    mea->add_option("op", mea_op, "operation")->required()->check(CLI::IsMember({"eval", "g1", "g1pp", "g1p", "decompose"}));
    mea->add_option("--model", mea_model, "model name");
    mea->add_option("--measure", mea_measure, "measure JSON file (eval, decompose)");
    mea->add_option("--observable", mea_obs, "observable descriptor");
    mea->add_option("--region", mea_region, "region descriptor");
    mea->add_option("--lambda-max", mea_lmax, "spectral truncation for g1");
    mea->add_option("--orbit", mea_orbit, "Dirac measure JSON file naming the orbit (decompose)");
    mea->add_option("--tol", mea_tol, "orbit matching tolerance (decompose)");
    add_common(mea, mea_c);

    // detect-zoll
    Common det_c;
    std::string det_input, det_model, det_expect;
    double det_bound = 60.0;
    auto* det = app.add_subcommand("detect-zoll", "Zoll-consistency verdict for a spectrum");
    det->add_option("--input", det_input, "eigenvalue file, one per line, '#' comments");
    det->add_option("--model", det_model, "built-in spectrum: sphere or torus");
    det->add_option("--bound", det_bound, "degree (sphere) or lattice radius (torus) bound");
    det->add_option("--expect", det_expect, "expected verdict; mismatch exits with 2")
        ->check(CLI::IsMember({"zoll-consistent", "not-zoll-consistent", "inconclusive"}));
    add_common(det, det_c);

    // observability
    Common obs_c;
    std::string obs_region;
    std::string obs_T;
    double obs_lmax = 0.0;
    auto* obs = app.add_subcommand("observability", "observability constants against the g1/g2 bracket");
    obs->add_option("--region", obs_region, "region descriptor (closed)");
    obs->add_option("--T-list", obs_T, "comma-separated horizons, e.g. 2*pi,4*pi");
    obs->add_option("--lmax", obs_lmax, "spectral truncation");
    add_common(obs, obs_c);

    // coherent
    Common coh_c;
    double coh_k = 0.0, coh_r = 0.0;
    std::string coh_center, coh_dir, coh_t;
    auto* coh = app.add_subcommand("coherent", "Gaussian beam mass along the geodesic on the sphere");
    coh->add_option("--k", coh_k, "scale k");
    coh->add_option("--center", coh_center, "longitude,latitude");
    coh->add_option("--direction", coh_dir, "covector xi_lon,xi_lat");
    coh->add_option("--t-list", coh_t, "comma-separated times");
    coh->add_option("--tube-r", coh_r, "tube radius");
    add_common(coh, coh_c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kPass : kError;
    }

    try {
        if (*suite) return finish(run_suite(suite_name, load_config(suite_c), {}), suite_c);

        if (*obs) {
            Config cfg = load_config(obs_c);
            if (!obs_region.empty()) cfg.set("observability.region", obs_region);
            if (!obs_T.empty()) cfg.set("observability.T_list", obs_T);
            if (obs_lmax > 0) cfg.set("observability.lambda_max", format_double(obs_lmax));
            return finish(run_suite("observability", cfg, {}), obs_c);
        }

        if (*coh) {
            Config cfg = load_config(coh_c);
            if (coh_k > 0) cfg.set("coherent.k", format_double(coh_k));
            if (!coh_center.empty()) cfg.set("coherent.center", coh_center);
            if (!coh_dir.empty()) cfg.set("coherent.direction", coh_dir);
            if (!coh_t.empty()) cfg.set("coherent.t_list", coh_t);
            if (coh_r > 0) cfg.set("coherent.tube_r", format_double(coh_r));
            return finish(run_suite("coherent", cfg, {}), coh_c);
        }

        if (*fun) {
            const Config cfg = load_config(fun_c);
            const SurfaceModel m = SurfaceModel::from_name(cfg.get_string("model.kind", fun_model));
            const GeodesicFlow flow(m);
            const Observable a = observable_from(m, fun_obs, fun_region);
            const PhaseGrid grid = PhaseGrid::product(m, fun_grid[0], fun_grid[1]);
            json j = document("functionals");
            j["model"] = m.name();
            j["observable"] = a.label();
            json reps = json::array();
            DoublingOptions d;
            d.K = fun_K;
            if (fun_which == "g2T" || fun_which == "all") reps.push_back(to_json(g2T(flow, a, parse_number(fun_T), grid)));
            if (fun_which == "g2" || fun_which == "all") reps.push_back(to_json(g2(flow, a, grid, d)));
            if (fun_which == "g2prime" || fun_which == "all") {
                reps.push_back(to_json(g2prime(flow, a, grid, multiples(d.T0 * std::ldexp(1.0, d.K), 8))));
            }
            j["reports"] = reps;
            emit_json(fun_c.out, j);
            return kPass;
        }

        if (*mea) {
            const SurfaceModel m = SurfaceModel::from_name(mea_model);
            const GeodesicFlow flow(m);
            json j = document("measures");
            j["model"] = m.name();
            j["op"] = mea_op;
            if (mea_op == "eval") {
                if (mea_measure.empty()) throw ParseError("eval needs --measure", "measure");
                const InvariantMeasure mu = measure_from_json(measure_file(mea_measure), m);
                const Observable a = observable_from(m, mea_obs, mea_region);
                j["measure"] = to_json(mu);
                j["value"] = measure_eval(flow, mu, a);
            } else if (mea_op == "g1") {
                const SpectrumTable t = eigenbasis(m, mea_lmax);
                const Observable a = observable_from(m, mea_obs, mea_region);
                j["report"] = to_json(g1(t, a));
            } else if (mea_op == "g1pp") {
                j["report"] = to_json(g1_second(flow, observable_from(m, mea_obs, mea_region), invariant_family(flow)));
            } else if (mea_op == "g1p") {
                j["report"] = to_json(g1_prime(flow, observable_from(m, mea_obs, mea_region), ql_family(flow)));
            } else {
                if (mea_measure.empty() || mea_orbit.empty()) throw ParseError("decompose needs --measure and --orbit", "measure");
                const InvariantMeasure mu = measure_from_json(measure_file(mea_measure), m);
                const InvariantMeasure orbit = measure_from_json(measure_file(mea_orbit), m);
                const auto* d = std::get_if<DiracOrbit>(&orbit.variant());
                if (!d) throw ParseError("--orbit must hold a dirac measure", "orbit");
                const Decomposition dec = decompose_along(flow, mu, PeriodicOrbit{d->start, d->period, 0.0}, mea_tol);
                j["weight"] = dec.weight;
                j["matched"] = dec.matched;
                j["remainder"] = to_json(dec.remainder);
            }
            emit_json(mea_c.out, j);
            return kPass;
        }

        if (*det) {
            std::vector<double> spectrum;
            if (!det_input.empty() && !det_model.empty()) throw ParseError("give either --input or --model", "detect-zoll");
            if (!det_input.empty()) spectrum = parse_eigenvalues(read_file(det_input));
            else if (!det_model.empty()) spectrum = model_spectrum(det_model, det_bound);
            else throw ParseError("missing --input or --model", "detect-zoll");
            const ZollVerdict v = detect_zoll(spectrum);
            json j = document("zoll_verdict");
            j["source"] = det_input.empty() ? det_model : det_input;
            j["count"] = spectrum.size();
            j.update(to_json(v));
            emit_json(det_c.out, j);
            std::cout << "verdict: " << to_string(v.verdict) << " (" << v.rule << ")\n";
            if (!det_expect.empty() && det_expect != to_string(v.verdict)) return kVerdictFail;
            return kPass;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kError;
    }
    return kError;
}
