#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "presets.hpp"
#include "smav/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace smav;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool has_error_containing(const ParseResult& r, const std::string& needle) {
  for (const auto& e : r.errors)
    if (e.find(needle) != std::string::npos) return true;
  return false;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("smav_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("minimal document gets the normalized defaults") {
  const ParseResult r = parse_scenario(R"({
    "mesh": {"elements": 8},
    "time": {"t_end": 0.01}
  })");
  REQUIRE(r.ok());
  const Scenario& sc = *r.scenario;
  CHECK(sc.mesh.length == 1.0);
  CHECK(sc.material.K == 1.0);
  CHECK(sc.material.C_bar == 1.0);
  CHECK(sc.material.l_a == 1.0);
  CHECK(sc.material.lambda == 1.0);
  CHECK(sc.material.upsilon == 1.0);
  CHECK(sc.material.c_visc == 1.0);
  CHECK(sc.material.k_grad == 1.0);
  CHECK(sc.material.theta_0 == 1.0);
  CHECK(sc.theta0.value == 1.0);
  CHECK(sc.beta0[0].value == doctest::Approx(1.0 / 3.0));
  CHECK(sc.config.epsilon == 1e-2);
  CHECK(sc.config.fp_max_iter == 50);
  CHECK(sc.config.picard_relaxation == 0.7);
}

TEST_CASE("inadmissible initial fractions are rejected with the violated constraint") {
  const ParseResult r = parse_scenario(R"({
    "mesh": {"elements": 8},
    "initial": {"beta1": 0.6, "beta2": 0.6, "beta3": 0.0},
    "time": {"t_end": 0.01}
  })");
  CHECK(!r.ok());
  CHECK(has_error_containing(r, "sum <= 1"));
}

TEST_CASE("positive tau_bar is rejected") {
  const ParseResult r = parse_scenario(R"({
    "mesh": {"elements": 8},
    "material": {"tau_bar": 0.5},
    "time": {"t_end": 0.01}
  })");
  CHECK(!r.ok());
  CHECK(has_error_containing(r, "tau_bar must be nonpositive"));
}

TEST_CASE("nonpositive initial temperature names the entropy formulation") {
  const ParseResult r = parse_scenario(R"({
    "mesh": {"elements": 8},
    "initial": {"theta": -1.0},
    "time": {"t_end": 0.01}
  })");
  CHECK(!r.ok());
  CHECK(has_error_containing(r, "image of exp"));
}

TEST_CASE("unknown keys are errors with their path") {
  const ParseResult top = parse_scenario(R"({"mesh": {"elements": 8}, "time": {"t_end": 1}, "extra": 1})");
  CHECK(has_error_containing(top, "$.extra: unknown key"));

  const ParseResult nested =
      parse_scenario(R"({"mesh": {"elements": 8, "bogus": 2}, "time": {"t_end": 1}})");
  CHECK(has_error_containing(nested, "$.mesh.bogus: unknown key"));
}

TEST_CASE("validation completeness: every invariant has a rejecting document") {
  const auto reject = [](const std::string& body, const std::string& needle) {
    const ParseResult r = parse_scenario(body);
    CHECK(!r.ok());
    CHECK(has_error_containing(r, needle));
  };
  reject(R"({"mesh": {"elements": 1}, "time": {"t_end": 1}})", "at least 2");
  reject(R"({"mesh": {"elements": 8, "length": -1}, "time": {"t_end": 1}})", "length");
  reject(R"({"mesh": {"elements": 8}, "time": {"t_end": 1, "dt": 0}})", "dt");
  reject(R"({"mesh": {"elements": 8}, "time": {"t_end": -1}})", "t_end");
  reject(R"({"mesh": {"elements": 8}, "time": {"t_end": 1, "stride": 0}})", "stride");
  reject(R"({"mesh": {"elements": 8}, "time": {"t_end": 1}, "solver": {"epsilon": 0}})", "epsilon");
  reject(R"({"mesh": {"elements": 8}, "time": {"t_end": 1}, "solver": {"fp_tol": 0}})", "fp_tol");
  reject(R"({"mesh": {"elements": 8}, "time": {"t_end": 1}, "solver": {"fp_max_iter": 0}})",
         "fp_max_iter");
  reject(R"({"mesh": {"elements": 8}, "time": {"t_end": 1}, "solver": {"picard_relaxation": 1.5}})",
         "picard_relaxation");
  reject(R"({"mesh": {"elements": 8}, "material": {"c_visc": 0}, "time": {"t_end": 1}})", "c_visc");
  reject(R"({"mesh": {"elements": 8}, "material": {"C_bar": 0}, "time": {"t_end": 1}})", "C_bar");
  reject(R"({"mesh": {"elements": 8}, "material": {"theta_c": 0.5}, "time": {"t_end": 1}})",
         "theta_c");
  reject(R"({"mesh": {"elements": 8}, "material": {"K": 0}, "time": {"t_end": 1}})", "K");
  reject(R"({"mesh": {"elements": 8}, "material": {"k_grad": 0}, "time": {"t_end": 1}})", "k_grad");
  reject(R"({"mesh": {"elements": 8}, "initial": {"u": 0.1}, "time": {"t_end": 1}})",
         "essential boundary");
  reject(R"({"mesh": {"elements": 8}, "initial": {"beta1": -0.1}, "time": {"t_end": 1}})",
         "nonnegative");
}

TEST_CASE("shipped scenario files mirror the presets") {
  const fs::path root = fs::path(SMAV_SOURCE_DIR) / "scenarios";
  const auto matches = [&](const char* file, const Scenario& preset) {
    const ParseResult r = load_scenario(root / file);
    REQUIRE_MESSAGE(r.ok(), file);
    CHECK(serialize_scenario(*r.scenario) == serialize_scenario(preset));
  };
  matches("trivial.json", presets::trivial_equilibrium());
  matches("relax_hot.json", presets::relax_hot());
  matches("loaded.json", presets::loaded());
  matches("cooling_heating.json", presets::cooling_heating());
}

TEST_CASE("serialize-parse round trip yields a bit-identical trajectory") {
  Scenario sc = presets::loaded();
  sc.config.t_end = 0.05;
  const ParseResult reparsed = parse_scenario(serialize_scenario(sc));
  REQUIRE(reparsed.ok());

  const Trajectory a = run_simulation(sc);
  const Trajectory b = run_simulation(*reparsed.scenario);
  REQUIRE(a.completed);
  REQUIRE(b.completed);
  REQUIRE(a.states.size() == b.states.size());
  for (std::size_t n = 0; n < a.states.size(); ++n) {
    CHECK(a.states[n].u == b.states[n].u);
    CHECK(a.states[n].w == b.states[n].w);
    CHECK(a.states[n].p == b.states[n].p);
    for (int i = 0; i < 3; ++i) CHECK(a.states[n].beta[i] == b.states[n].beta[i]);
  }
}

TEST_CASE("trajectory files: stride count and byte-identical reload") {
  Scenario sc = presets::trivial_equilibrium();  // 100 steps at dt = 1e-3
  const Trajectory traj = run_simulation(sc);
  REQUIRE(traj.completed);

  const fs::path dir1 = fresh_dir("write1");
  const auto written = write_trajectory(traj, sc, dir1, 5);
  CHECK(written.size() == 21);  // 0, 5, ..., 100

  const StoredTrajectory stored = read_trajectory(dir1);
  REQUIRE(stored.states.size() == 21);
  CHECK(stored.timeseries_rows == 100);

  // Re-emit the stored snapshots: byte-identical files.
  Trajectory reloaded;
  reloaded.states = stored.states;
  reloaded.completed = true;
  const fs::path dir2 = fresh_dir("write2");
  const auto rewritten = write_trajectory(reloaded, stored.scenario, dir2, 1);
  REQUIRE(rewritten.size() == written.size());
  for (std::size_t i = 0; i < written.size(); ++i) {
    CHECK(slurp(written[i]).size() == slurp(rewritten[i]).size());
    CHECK(slurp(written[i]) == slurp(rewritten[i]));
  }

  fs::remove_all(dir1);
  fs::remove_all(dir2);
}
