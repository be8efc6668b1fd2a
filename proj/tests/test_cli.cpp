#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "smav/cli.hpp"

#include <filesystem>
#include <fstream>

using namespace smav;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = fs::path(SMAV_SOURCE_DIR) / "scenarios";

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("smav_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

fs::path write_temp(const std::string& name, const std::string& body) {
  const fs::path file = fs::temp_directory_path() / name;
  std::ofstream out(file);
  out << body;
  return file;
}

}  // namespace

TEST_CASE("run: valid scenario completes and writes the output set") {
  const fs::path out = fresh_dir("run");
  const int code = cli_main({"run", (kScenarios / "trivial.json").string(), "--out", out.string()});
  CHECK(code == 0);
  CHECK(fs::exists(out / "scenario.json"));
  CHECK(fs::exists(out / "timeseries.tsv"));
  CHECK(fs::exists(out / "snapshots" / "snapshot_000000.tsv"));
  fs::remove_all(out);
}

TEST_CASE("run: invalid scenario exits 1") {
  const fs::path bad = write_temp("smav_bad_beta.json", R"({
    "mesh": {"elements": 8},
    "initial": {"beta1": 0.6, "beta2": 0.6, "beta3": 0.0},
    "time": {"t_end": 0.01}
  })");
  CHECK(cli_main({"run", bad.string()}) == 1);
  CHECK(cli_main({"run", "no_such_file.json"}) == 1);
  fs::remove(bad);
}

TEST_CASE("audit: recomputes the ledger of a written trajectory") {
  const fs::path out = fresh_dir("audit");
  REQUIRE(cli_main({"run", (kScenarios / "trivial.json").string(), "--out", out.string()}) == 0);
  CHECK(cli_main({"audit", out.string()}) == 0);
  CHECK(fs::exists(out / "audit.tsv"));
  fs::remove_all(out);
}

TEST_CASE("sweep-epsilon: insufficient span exits 1") {
  const auto file = (kScenarios / "loaded.json").string();
  CHECK(cli_main({"sweep-epsilon", file, "--epsilons", "0.1"}) == 1);
  CHECK(cli_main({"sweep-epsilon", file, "--epsilons", "0.1,0.05,0.02"}) == 1);
}

TEST_CASE("depend: zero perturbation runs cleanly") {
  const fs::path out = fresh_dir("depend");
  const int code = cli_main({"depend", (kScenarios / "trivial.json").string(), "--deltas", "0",
                             "--out", out.string()});
  CHECK(code == 0);
  CHECK(fs::exists(out / "depend.tsv"));
  fs::remove_all(out);
}

TEST_CASE("unknown flags and subcommands are usage errors") {
  CHECK(cli_main({"run", "x.json", "--bogus"}) == 1);
  CHECK(cli_main({"frobnicate"}) == 1);
  CHECK(cli_main({}) == 1);
}

TEST_CASE("check: the built-in property suite passes") {
  CHECK(cli_main({"check"}) == 0);
}
