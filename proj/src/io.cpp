#include "zoll/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "zoll/errors.hpp"

namespace zoll {

json document(const std::string& kind) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = kind;
    return j;
}

json to_json(const PhasePoint& z) { return {{"chart", z.chart}, {"x", z.x}, {"xi", z.xi}}; }

PhasePoint phase_point_from_json(const json& j) {
    PhasePoint z;
    z.chart = j.at("chart").get<int>();
    z.x = j.at("x").get<Vec2>();
    z.xi = j.at("xi").get<Vec2>();
    return z;
}

namespace {

// JSON has no infinity; horizons such as T = infinity are written as strings.
json number(double x) {
    if (std::isfinite(x)) return x;
    return format_double(x);
}

}  // namespace

json to_json(const FunctionalReport& r) {
    json j;
    j["functional"] = r.functional;
    j["value"] = number(r.value);
    j["tag"] = std::string(to_string(r.tag));
    if (r.argmin) j["argmin"] = to_json(*r.argmin);
    if (r.grid_index) j["grid_index"] = *r.grid_index;
    if (r.eigenvalue) j["eigenvalue"] = *r.eigenvalue;
    if (!r.coefficients.empty()) j["coefficients"] = r.coefficients;
    if (!r.measure_label.empty()) j["measure"] = r.measure_label;
    json trace = json::array();
    for (const TracePoint& t : r.trace) trace.push_back({number(t.parameter), number(t.value)});
    j["trace"] = trace;
    j["monotone"] = r.monotone;
    j["partial"] = r.partial;
    json meta = json::object();
    for (const auto& [k, v] : r.meta) meta[k] = number(v);
    j["meta"] = meta;
    j["notes"] = r.notes;
    return j;
}

json to_json(const ZollVerdict& v) {
    json j;
    j["verdict"] = std::string(to_string(v.verdict));
    j["rule"] = v.rule;
    j["gap"] = {{"flag", v.gap.flag}, {"gap", number(v.gap.gap)}, {"c_min", v.gap_min}};
    j["ulf"] = {{"flag", v.ulf.flag},
                {"length", v.ulf_length},
                {"m", v.ulf_count},
                {"worst_count", v.ulf.worst_count},
                {"worst_start", v.ulf.worst_start}};
    j["net"] = {{"ok", v.net.ok},
                {"flag", v.net_flag},
                {"period", v.net.period},
                {"spacing", v.net.spacing},
                {"sigma", v.net.sigma},
                {"max_residual", v.net.max_residual},
                {"rms_residual", v.net.rms_residual},
                {"threshold", v.net_threshold},
                {"used_values", v.net.used_values},
                {"iterations", v.net.iterations},
                {"diagnostic", v.net.diagnostic}};
    j["histogram"] = {{"window", v.histogram.window},
                      {"edges", v.histogram.edges},
                      {"counts", v.histogram.counts},
                      {"covered_fraction", v.histogram.covered_fraction},
                      {"used_values", v.histogram.used_values}};
    return j;
}

json spectrum_json(const SpectrumTable& table) {
    json j = document("spectrum");
    j["model"] = table.model().name();
    j["lambda_max"] = table.lambda_max();
    j["basis_size"] = table.basis_size();
    json spaces = json::array();
    for (const Eigenspace& e : table.spaces()) {
        json basis = json::array();
        for (const BasisFunction& b : e.basis) basis.push_back(b.label);
        spaces.push_back({{"lambda", e.lambda}, {"multiplicity", e.multiplicity()}, {"offset", e.offset}, {"basis", basis}});
    }
    j["eigenspaces"] = spaces;
    return j;
}

json mass_matrix_json(const SpectrumTable& table, const std::vector<MassMatrix>& blocks) {
    json j = document("mass_matrix");
    j["model"] = table.model().name();
    j["lambda_max"] = table.lambda_max();
    j["weight"] = blocks.empty() ? std::string() : blocks.front().weight_label;
    json arr = json::array();
    for (const MassMatrix& m : blocks) {
        const Eigenspace& e = table.spaces()[table.index_of(m.lambda)];
        json basis = json::array();
        for (const BasisFunction& b : e.basis) basis.push_back(b.label);
        json rows = json::array();
        for (Eigen::Index r = 0; r < m.matrix.rows(); ++r) {
            std::vector<double> row(static_cast<std::size_t>(m.matrix.cols()));
            for (Eigen::Index c = 0; c < m.matrix.cols(); ++c) row[static_cast<std::size_t>(c)] = m.matrix(r, c);
            rows.push_back(row);
        }
        arr.push_back({{"lambda", m.lambda},
                       {"basis", basis},
                       {"matrix", rows},
                       {"error_estimate", m.error_estimate},
                       {"accuracy_warning", m.accuracy_warning}});
    }
    j["blocks"] = arr;
    return j;
}

json to_json(const InvariantMeasure& mu) {
    json j;
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, DiracOrbit>) {
                j["type"] = "dirac";
                j["start"] = to_json(v.start);
                j["period"] = v.period;
            } else if constexpr (std::is_same_v<T, Liouville>) {
                j["type"] = "liouville";
            } else if constexpr (std::is_same_v<T, TorusDirection>) {
                j["type"] = "torus_direction";
                j["angle"] = v.angle;
                j["symmetric"] = v.symmetric;
            } else if constexpr (std::is_same_v<T, EigenDensity>) {
                j["type"] = "eigen_density";
                j["lambda_max"] = v.table->lambda_max();
                j["space"] = v.space;
                j["lambda"] = v.table->spaces()[v.space].lambda;
                j["coefficients"] = std::vector<double>(v.coefficients.data(), v.coefficients.data() + v.coefficients.size());
            } else {
                j["type"] = "mixture";
                j["weights"] = v.weights;
                json parts = json::array();
                for (const InvariantMeasure& p : v.parts) parts.push_back(to_json(p));
                j["parts"] = parts;
            }
        },
        mu.variant());
    if (!mu.label().empty()) j["label"] = mu.label();
    return j;
}

InvariantMeasure measure_from_json(const json& j, const SurfaceModel& model, std::shared_ptr<const SpectrumTable> table) {
    try {
        const std::string type = j.at("type").get<std::string>();
        const std::string label = j.value("label", std::string());
        if (type == "dirac") {
            return InvariantMeasure::dirac(phase_point_from_json(j.at("start")), j.at("period").get<double>(), label);
        }
        if (type == "liouville") return InvariantMeasure::liouville();
        if (type == "torus_direction") {
            return InvariantMeasure::torus_direction(j.at("angle").get<double>(), j.value("symmetric", false));
        }
        if (type == "eigen_density") {
            const double lmax = j.at("lambda_max").get<double>();
            if (!table || table->lambda_max() != lmax) table = std::make_shared<const SpectrumTable>(eigenbasis(model, lmax));
            const auto c = j.at("coefficients").get<std::vector<double>>();
            return InvariantMeasure::eigen_density(table, j.at("space").get<std::size_t>(),
                                                   Eigen::Map<const Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size())),
                                                   label);
        }
        if (type == "mixture") {
            std::vector<InvariantMeasure> parts;
            for (const json& p : j.at("parts")) parts.push_back(measure_from_json(p, model, table));
            return InvariantMeasure::mixture(j.at("weights").get<std::vector<double>>(), std::move(parts), label);
        }
        throw ParseError("unknown measure type '" + type + "'", "type");
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed measure: ") + e.what(), "measure");
    }
}

void write_json(const std::filesystem::path& path, const json& j) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& row : rows) {
        if (row.size() != header.size()) throw PreconditionError("CSV row width differs from the header");
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
        out << "\n";
    }
}

std::vector<double> parse_eigenvalues(const std::string& text) {
    std::vector<double> out;
    std::istringstream in(text);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const auto e = line.find_last_not_of(" \t\r");
        const std::string item = line.substr(b, e - b + 1);
        double v = 0.0;
        const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
        if (res.ec != std::errc() || res.ptr != item.data() + item.size() || !std::isfinite(v)) {
            throw ParseError("line " + std::to_string(n) + ": not a real number: '" + item + "'", "eigenvalues");
        }
        out.push_back(v);
    }
    return out;
}

}  // namespace zoll
