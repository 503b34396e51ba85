#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "zoll/errors.hpp"
#include "zoll/io.hpp"

using namespace zoll;

namespace {

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "zoll_io_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("format_double round trips") {
    for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.283185307179586, 1e22, 0.0}) {
        CHECK(std::stod(format_double(x)) == x);
    }
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("csv layout") {
    const auto p = scratch("t.csv");
    write_csv(p, {"T", "C_T"}, {{6.283185307179586, 0.25}, {12.5, 1e-5}});
    CHECK(slurp(p) == "T,C_T\n6.283185307179586,0.25\n12.5,1e-05\n");
    CHECK_THROWS_AS(write_csv(p, {"a", "b"}, {{1.0}}), PreconditionError);
}

TEST_CASE("eigenvalue text") {
    const auto v = parse_eigenvalues("# header\n0\n 1.5  # comment\n\n2e1\n");
    CHECK(v == std::vector<double>{0.0, 1.5, 20.0});
    try {
        (void)parse_eigenvalues("1\n2\nthree\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    CHECK_THROWS_AS((void)parse_eigenvalues("inf\n"), ParseError);
}

TEST_CASE("measure json round trip") {
    const SurfaceModel s = SurfaceModel::sphere();
    const PhasePoint z = s.make_phase_point(0, {1.2, 0.4}, {0.3, -0.7});
    const InvariantMeasure mu = InvariantMeasure::mixture(
        {0.25, 0.5, 0.25},
        {InvariantMeasure::dirac(z, kTwoPi, "gc"), InvariantMeasure::liouville(), InvariantMeasure::torus_direction(0.3, true)},
        "mix");
    const json j = to_json(mu);
    CHECK(j["type"] == "mixture");
    CHECK(j["parts"][0]["type"] == "dirac");
    CHECK(j["parts"][2]["symmetric"] == true);
    const InvariantMeasure back = measure_from_json(json::parse(j.dump()), s);
    CHECK(to_json(back) == j);
    CHECK(back.label() == "mix");

    const auto table = std::make_shared<const SpectrumTable>(eigenbasis(s, 3.0));
    Eigen::VectorXd c = Eigen::VectorXd::Zero(5);
    c[2] = 1.0;
    const InvariantMeasure d = InvariantMeasure::eigen_density(table, 2, c, "y20");
    const InvariantMeasure d2 = measure_from_json(to_json(d), s);
    CHECK(to_json(d2) == to_json(d));

    CHECK_THROWS_AS((void)measure_from_json(json{{"type", "weird"}}, s), ParseError);
    CHECK_THROWS_AS((void)measure_from_json(json{{"type", "dirac"}}, s), ParseError);
}

TEST_CASE("report json") {
    FunctionalReport r;
    r.functional = "g2";
    r.value = 0.25;
    r.argmin = PhasePoint{0, {1.0, 2.0}, {0.0, 1.0}};
    r.trace = {{kTwoPi, 0.2}, {2 * kTwoPi, 0.25}};
    r.meta["T"] = std::numeric_limits<double>::infinity();
    const json j = to_json(r);
    CHECK(j["value"] == 0.25);
    CHECK(j["tag"] == "upper-bound");
    CHECK(j["trace"].size() == 2);
    CHECK(j["meta"]["T"] == "inf");
    const PhasePoint z = phase_point_from_json(j["argmin"]);
    CHECK(z.x[1] == 2.0);

    const auto p = scratch("r.json");
    json d = document("functional");
    d["report"] = j;
    write_json(p, d);
    const json back = read_json(p);
    CHECK(back["schema_version"] == kSchemaVersion);
    CHECK(back == d);
    CHECK_THROWS_AS((void)read_json(scratch("missing.json")), ParseError);
}

TEST_CASE("spectrum and mass matrix documents") {
    const SpectrumTable t = eigenbasis(SurfaceModel::sphere(), 2.0);
    const json s = spectrum_json(t);
    CHECK(s["kind"] == "spectrum");
    CHECK(s["basis_size"] == 9);
    CHECK(s["eigenspaces"][2]["multiplicity"] == 5);
    CHECK(s["eigenspaces"][2]["offset"] == 4);
    const auto blocks = mass_matrices(t, weight_of(make_region(t.model(), "cap(lat>=0)")));
    const json m = mass_matrix_json(t, blocks);
    CHECK(m["blocks"].size() == 3);
    CHECK(m["blocks"][1]["matrix"].size() == 3);
    CHECK(m["blocks"][1]["matrix"][0][0].get<double>() == doctest::Approx(0.5).epsilon(1e-10));
}
