#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "zoll/config.hpp"
#include "zoll/detector.hpp"
#include "zoll/errors.hpp"
#include "zoll/functionals.hpp"
#include "zoll/io.hpp"
#include "zoll/measures.hpp"
#include "zoll/suites.hpp"

namespace py = pybind11;
using namespace zoll;

namespace {

// JSON crosses the boundary as text; the Python side decodes it.
std::string dump(const json& j) { return j.dump(); }

std::string run_suite_json(const std::string& name, const std::string& config_text, const std::string& out) {
    const Config c = Config::parse(config_text, "<python>");
    return dump(to_json(run_suite(name, c, out)));
}

std::string detect_json(const std::vector<double>& spectrum) { return dump(to_json(detect_zoll(spectrum))); }

double region_area(const std::string& model, const std::string& descriptor) {
    return area(make_region(SurfaceModel::from_name(model), descriptor));
}

std::string g1_json(const std::string& model, const std::string& descriptor, double lambda_max) {
    const SurfaceModel m = SurfaceModel::from_name(model);
    return dump(to_json(g1(eigenbasis(m, lambda_max), make_region(m, descriptor))));
}

std::string g2T_json(const std::string& model, const std::string& observable, double T, int base, int directions) {
    const SurfaceModel m = SurfaceModel::from_name(model);
    const GeodesicFlow flow(m);
    return dump(to_json(g2T(flow, make_observable(m, observable), T, PhaseGrid::product(m, base, directions))));
}

}  // namespace

PYBIND11_MODULE(_zoll_lab, mod) {
    mod.doc() = "Bindings for the zoll-lab C++ core";
    mod.attr("__version__") = kVersion;
    mod.attr("schema_version") = kSchemaVersion;

    // Translators are tried newest first, so the base class goes in before ParseError.
    py::register_exception<Error>(mod, "ZollError", PyExc_RuntimeError);
    py::register_exception<ParseError>(mod, "ParseError", PyExc_ValueError);

    mod.def("suite_names", &suite_names);
    mod.def("run_suite_json", &run_suite_json, py::arg("name"), py::arg("config_text") = "", py::arg("out") = "",
            py::call_guard<py::gil_scoped_release>());
    mod.def("model_spectrum", &model_spectrum, py::arg("model"), py::arg("bound"));
    mod.def("detect_zoll_json", &detect_json, py::arg("spectrum"));
    mod.def("region_area", &region_area, py::arg("model"), py::arg("descriptor"));
    mod.def("g1_json", &g1_json, py::arg("model"), py::arg("region"), py::arg("lambda_max"));
    mod.def("g2T_json", &g2T_json, py::arg("model"), py::arg("observable"), py::arg("T"), py::arg("base") = 24,
            py::arg("directions") = 32, py::call_guard<py::gil_scoped_release>());
    mod.def("config_hash", [](const std::string& text) { return Config::parse(text).hash(); }, py::arg("text"));
}
