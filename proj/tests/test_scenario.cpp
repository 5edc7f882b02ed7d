#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "fbcsf/scenario.hpp"

using namespace fbcsf;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kChordConfig = R"({
  "name": "chord",
  "barrier": {"kind": "sphere", "center": [0, 0], "radius": 2},
  "initial": {"model": "chord", "a": [-2, 0], "b": [2, 0]},
  "flow": {"node_count": 64, "cfl": 0.5, "t_end": 0.05, "output_every": 50},
  "analyses": [
    {"check": "max_displacement", "tol": 1e-8},
    {"check": "length_monotone"},
    {"check": "boundary_residual"}
  ]
})";

const char* kSemicircleConfig = R"({
  "name": "semicircle",
  "barrier": {"kind": "flat", "normal": [-1, 0], "offset": 0},
  "initial": {"model": "semicircle", "center": [0, 0], "radius": 1,
              "inward": [1, 0], "tangent": [0, 1]},
  "flow": {"node_count": 64, "cfl": 0.5, "t_end": 0.495, "len_min": 1e-6,
           "output_every": 100},
  "analyses": [
    {"check": "t_est", "expect": 0.5, "tol": 0.01},
    {"check": "radius_law", "center": [0, 0], "r0": 1.0, "tol_rel": 0.005, "t_max": 0.48}
  ],
  "entropy": {"sigma_hat": [0.25, 0.0625], "radii": ["inf"]}
})";

}  // namespace

TEST_CASE("run_scenario: stationary chord exits 0 with the documented artifacts") {
    const fs::path dir = fs::temp_directory_path() / "fbcsf_chord_test";
    fs::remove_all(dir);
    CHECK(run_scenario_text(kChordConfig, dir.string()) == 0);

    const std::string csv = slurp(dir / "timeseries.csv");
    CHECK(csv.rfind("t,dt,length,max_kappa,max_kappa_sqrt_T_minus_t,boundary_dist,"
                    "boundary_angle,phi_main\n",
                    0) == 0);
    CHECK(fs::exists(dir / "states" / "0000.json"));
    CHECK(fs::exists(dir / "report.json"));
    const std::string report = slurp(dir / "report.json");
    CHECK(report.find("\"pass\": true") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("run_scenario: semicircle hits the exact extinction window") {
    const fs::path dir = fs::temp_directory_path() / "fbcsf_semi_test";
    fs::remove_all(dir);
    CHECK(run_scenario_text(kSemicircleConfig, dir.string()) == 0);
    const std::string report = slurp(dir / "report.json");
    CHECK(report.find("\"t_est\"") != std::string::npos);
    CHECK(report.find("\"entropy\"") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("run_scenario: malformed config exits 2") {
    CHECK(run_scenario_text("{\"name\": \"broken\"}") == 2);        // missing barrier
    CHECK(run_scenario_text("this is not json at all") == 2);
    CHECK(run_scenario_text(R"({
      "name": "bad-model",
      "barrier": {"kind": "none"},
      "initial": {"model": "dodecahedron"},
      "flow": {"node_count": 64, "t_end": 1.0}
    })") == 2);
    CHECK(run_scenario_text(R"({
      "name": "bad-check",
      "barrier": {"kind": "none"},
      "initial": {"model": "circle", "center": [0,0], "radius": 1,
                  "e1": [1,0], "e2": [0,1]},
      "flow": {"node_count": 64, "t_end": 0.01},
      "analyses": [{"check": "no-such-check"}]
    })") == 2);
}

TEST_CASE("run_scenario: numerical blowup exits 3") {
    const fs::path dir = fs::temp_directory_path() / "fbcsf_blowup_test";
    fs::remove_all(dir);
    // one step large enough to push kappa-vector updates past the double
    // range (the per-step resampling filters merely unstable step sizes)
    const int code = run_scenario_text(R"({
      "name": "blowup",
      "barrier": {"kind": "none"},
      "initial": {"model": "circle", "center": [0,0], "radius": 0.2,
                  "e1": [1,0], "e2": [0,1]},
      "flow": {"node_count": 64, "t_end": 50.0, "dt_fixed": 1e308, "kappa_cap": 1e300}
    })", dir.string());
    CHECK(code == 3);
    fs::remove_all(dir);
}

TEST_CASE("run_scenario: tolerance failure exits 1") {
    const fs::path dir = fs::temp_directory_path() / "fbcsf_tolfail_test";
    fs::remove_all(dir);
    const int code = run_scenario_text(R"({
      "name": "impossible",
      "barrier": {"kind": "flat", "normal": [-1, 0], "offset": 0},
      "initial": {"model": "semicircle", "center": [0, 0], "radius": 1,
                  "inward": [1, 0], "tangent": [0, 1]},
      "flow": {"node_count": 64, "cfl": 0.5, "t_end": 0.1, "output_every": 100},
      "analyses": [{"check": "max_displacement", "tol": 1e-12}]
    })", dir.string());
    CHECK(code == 1);
    fs::remove_all(dir);
}

TEST_CASE("run_scenario: identical config produces byte-identical reports") {
    const fs::path a = fs::temp_directory_path() / "fbcsf_det_a";
    const fs::path b = fs::temp_directory_path() / "fbcsf_det_b";
    fs::remove_all(a);
    fs::remove_all(b);
    REQUIRE(run_scenario_text(kSemicircleConfig, a.string()) == 0);
    REQUIRE(run_scenario_text(kSemicircleConfig, b.string()) == 0);
    CHECK(slurp(a / "report.json") == slurp(b / "report.json"));
    CHECK(slurp(a / "timeseries.csv") == slurp(b / "timeseries.csv"));
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("perturbation stream is reproducible from the seed") {
    SplitMix64 a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
    SplitMix64 c(43);
    bool differs = false;
    SplitMix64 a2(42);
    for (int i = 0; i < 10; ++i)
        if (a2.next() != c.next()) differs = true;
    CHECK(differs);
    // uniform draws live in [-1, 1) and advance the state
    SplitMix64 probe(7);
    const double u = probe.uniform_pm1();
    CHECK(u >= -1.0);
    CHECK(u < 1.0);
    CHECK(probe.state != SplitMix64(7).state);
}

TEST_CASE("models list names every kind") {
    const std::string list = models_list();
    for (const char* kind : {"chord", "line", "circle", "semicircle", "grim_reaper",
                             "half_grim_reaper"})
        CHECK(list.find(kind) != std::string::npos);
}
