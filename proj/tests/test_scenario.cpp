#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gpvortex/scenario.hpp"

using namespace gpvortex;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / name;
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST_CASE("scenario JSON parsing: defaults, overrides and strict keys") {
    const ScenarioConfig d = scenario_from_json_text("{}");
    CHECK(d.family == VortexFamily::single);
    CHECK(d.beta == 0.0);
    CHECK(d.points == 256);
    CHECK(d.engines == std::vector<std::string>{"gpe_numeric"});

    const ScenarioConfig c = scenario_from_json_text(R"({
        "name": "demo",
        "family": "tripole",
        "x0": 1.4142135623730951,
        "beta": 1.0,
        "engines": ["closed_form", "ritz_basis"],
        "grid": {"extent": 6.0, "points": 128},
        "duration": 2.0,
        "output_interval": 0.02,
        "tracking": {"v_max": 12.0}
    })");
    CHECK(c.name == "demo");
    CHECK(c.family == VortexFamily::tripole);
    CHECK(c.extent == 6.0);
    CHECK(c.points == 128);
    CHECK(c.tracking.v_max == 12.0);
    CHECK(c.tracking.max_coast == 2);  // untouched default

    CHECK_THROWS_WITH_AS(scenario_from_json_text(R"({"durations": 2.0})"),
                         doctest::Contains("unknown key"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(scenario_from_json_text(R"({"grid": {"pints": 64}})"),
                         doctest::Contains("unknown key"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(scenario_from_json_text(R"({"tracking": {"vmax": 1}})"),
                         doctest::Contains("unknown key"), std::invalid_argument);
    CHECK_THROWS_AS(scenario_from_json_text(R"({"family": "hexapole"})"), std::invalid_argument);
}

TEST_CASE("scenario JSON round trip preserves every field") {
    ScenarioConfig c;
    c.name = "roundtrip";
    c.family = VortexFamily::dipole;
    c.x0 = 0.75;
    c.beta = 0.5;
    c.engines = {"closed_form", "gpe_numeric"};
    c.extent = 10.0;
    c.points = 64;
    c.duration = 1.5;
    c.output_interval = 0.05;
    c.dt = 5e-4;
    c.detect_radius = 3.5;
    c.basis_degree = 9;
    c.output_dir = "/tmp/somewhere";
    c.vortices = {{0.3, -0.2, 1}};
    c.keep_fields = true;
    c.tracking.pair_radius = 0.4;

    const ScenarioConfig back = scenario_from_json_text(scenario_to_json_text(c));
    CHECK(back.name == c.name);
    CHECK(back.family == c.family);
    CHECK(back.x0 == c.x0);
    CHECK(back.beta == c.beta);
    CHECK(back.engines == c.engines);
    CHECK(back.extent == c.extent);
    CHECK(back.points == c.points);
    CHECK(back.duration == c.duration);
    CHECK(back.output_interval == c.output_interval);
    CHECK(back.dt == c.dt);
    CHECK(back.detect_radius == c.detect_radius);
    CHECK(back.basis_degree == c.basis_degree);
    CHECK(back.output_dir == c.output_dir);
    REQUIRE(back.vortices.size() == 1);
    CHECK(back.vortices[0].x == c.vortices[0].x);
    CHECK(back.keep_fields == c.keep_fields);
    CHECK(back.tracking.pair_radius == c.tracking.pair_radius);
}

TEST_CASE("scenario validation catches inconsistent configurations") {
    ScenarioConfig c;
    c.points = 64;
    c.duration = 0.2;
    c.output_interval = 0.05;
    c.engines = {"closed_form"};

    ScenarioConfig bad = c;
    bad.engines = {};
    CHECK_THROWS_AS(run_scenario(bad), std::invalid_argument);
    bad = c;
    bad.engines = {"magic"};
    CHECK_THROWS_AS(run_scenario(bad), std::invalid_argument);
    bad = c;
    bad.beta = -0.5;
    CHECK_THROWS_AS(run_scenario(bad), std::invalid_argument);
    bad = c;
    bad.duration = 0.23;  // not a multiple of the stride
    CHECK_THROWS_AS(run_scenario(bad), std::invalid_argument);
    bad = c;
    bad.x0 = 0.0;
    CHECK_THROWS_AS(run_scenario(bad), std::invalid_argument);
    bad = c;
    bad.vortices = {{0.5, 0.0, 1}};  // explicit lists need the numeric engine
    CHECK_THROWS_AS(run_scenario(bad), std::invalid_argument);
}

TEST_CASE("analytic and basis engines agree on the free single vortex") {
    ScenarioConfig c;
    c.name = "single-check";
    c.family = VortexFamily::single;
    c.x0 = 1.0;
    c.beta = 0.0;
    c.engines = {"closed_form", "ritz_basis"};
    c.extent = 8.0;
    c.points = 64;
    c.duration = 0.5;
    c.output_interval = 0.05;
    c.basis_degree = 8;

    const ScenarioResult r = run_scenario(c);
    REQUIRE(r.outputs.size() == 2);
    const EngineOutput& cf = r.outputs[0];
    const EngineOutput& rb = r.outputs[1];
    REQUIRE(cf.frames.size() == 11);
    REQUIRE(rb.frames.size() == 11);
    CHECK(rb.captured_weight == doctest::Approx(1.0).epsilon(1e-8));
    CHECK_FALSE(rb.basis_truncated);

    for (std::size_t k = 0; k < cf.frames.size(); ++k) {
        REQUIRE(cf.frames[k].observations.size() == 1);
        REQUIRE(rb.frames[k].observations.size() == 1);
        const auto& a = cf.frames[k].observations[0];
        const auto& b = rb.frames[k].observations[0];
        CHECK(std::hypot(a.x - b.x, a.y - b.y) < 1e-6);
    }
    // The orbit turns at unit frequency.
    REQUIRE(cf.omega_fit.has_value());
    CHECK(*cf.omega_fit == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("numeric engine follows the analytic single-vortex orbit") {
    ScenarioConfig c;
    c.family = VortexFamily::single;
    c.x0 = 1.0;
    c.beta = 0.0;
    c.engines = {"closed_form", "gpe_numeric"};
    c.points = 64;
    c.duration = 0.5;
    c.output_interval = 0.05;
    c.dt = 1e-3;

    const ScenarioResult r = run_scenario(c);
    const EngineOutput& cf = r.outputs[0];
    const EngineOutput& nm = r.outputs[1];
    REQUIRE(nm.frames.size() == cf.frames.size());
    CHECK(nm.log.norms.back() == doctest::Approx(1.0).epsilon(1e-10));
    for (std::size_t k = 0; k < cf.frames.size(); ++k) {
        REQUIRE(nm.frames[k].observations.size() == 1);
        const auto& a = cf.frames[k].observations[0];
        const auto& b = nm.frames[k].observations[0];
        CHECK(std::hypot(a.x - b.x, a.y - b.y) < 0.1);
    }
}

TEST_CASE("outputs are written completely and reproducibly") {
    const fs::path dir = fresh_dir("gpvortex_outputs_test");
    ScenarioConfig c;
    c.family = VortexFamily::single;
    c.x0 = 1.0;
    c.engines = {"closed_form"};
    c.points = 64;
    c.duration = 0.3;
    c.output_interval = 0.05;
    c.output_dir = dir.string();
    c.keep_fields = true;

    write_outputs(run_scenario(c));
    for (const char* f : {"manifest.json", "plot.py", "closed_form/trajectories.csv",
                          "closed_form/events.csv", "closed_form/detections.csv",
                          "closed_form/counts.csv", "closed_form/tracks.json",
                          "closed_form/summary.json", "closed_form/initial.field",
                          "closed_form/final.field"})
        CHECK_MESSAGE(fs::exists(dir / f), f);

    const std::string traj1 = slurp(dir / "closed_form/trajectories.csv");
    const std::string manifest1 = slurp(dir / "manifest.json");
    write_outputs(run_scenario(c));  // identical rerun
    CHECK(slurp(dir / "closed_form/trajectories.csv") == traj1);
    CHECK(slurp(dir / "manifest.json") == manifest1);

    // Self-comparison of a bundle is all zeros.
    const ComparisonReport self = compare_directories((dir / "closed_form").string(),
                                                      (dir / "closed_form").string());
    CHECK(self.frames_compared == 7);
    CHECK(self.count_mismatch_frames == 0);
    CHECK(self.unmatched_observations == 0);
    CHECK(self.max_position_deviation == 0.0);
    CHECK(self.unmatched_events == 0);
    CHECK(self.max_event_time_offset == 0.0);
    fs::remove_all(dir);
}

TEST_CASE("sweeps run concurrently and are invariant to value ordering") {
    ScenarioConfig base;
    base.family = VortexFamily::single;
    base.beta = 0.0;
    base.engines = {"closed_form"};
    base.points = 64;
    base.duration = 0.2;
    base.output_interval = 0.05;

    const fs::path dir_a = fresh_dir("gpvortex_sweep_a");
    base.output_dir = dir_a.string();
    const auto rows = run_sweep(base, "x0", {0.6, 1.2}, 2);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].value == 0.6);
    CHECK(rows[1].value == 1.2);
    CHECK(fs::exists(dir_a / "x0=0.6/closed_form/counts.csv"));
    CHECK(fs::exists(dir_a / "x0=1.2/closed_form/counts.csv"));
    CHECK(fs::exists(dir_a / "sweep_summary.json"));

    const fs::path dir_b = fresh_dir("gpvortex_sweep_b");
    base.output_dir = dir_b.string();
    run_sweep(base, "x0", {1.2, 0.6}, 1);  // reversed order, serial
    CHECK(slurp(dir_b / "sweep_summary.json")
              .find("\"dir\"") != std::string::npos);
    // Same rows in the same order regardless of input ordering / concurrency.
    std::string sa = slurp(dir_a / "sweep_summary.json");
    std::string sb = slurp(dir_b / "sweep_summary.json");
    // The directories differ by name; normalise before comparing.
    std::size_t pos;
    while ((pos = sa.find(dir_a.string())) != std::string::npos)
        sa.replace(pos, dir_a.string().size(), "OUT");
    while ((pos = sb.find(dir_b.string())) != std::string::npos)
        sb.replace(pos, dir_b.string().size(), "OUT");
    CHECK(sa == sb);

    CHECK_THROWS_AS(run_sweep(base, "gamma", {1.0}, 1), std::invalid_argument);
    CHECK_THROWS_AS(run_sweep(base, "beta", {}, 1), std::invalid_argument);
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
}
