#pragma once

#include "smav/scenario.hpp"
#include "smav/solver.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace smav {

struct ParseResult {
  std::optional<Scenario> scenario;
  std::vector<std::string> errors;  // parse and validation errors with paths

  bool ok() const { return scenario.has_value() && errors.empty(); }
};

/// Parses and validates a scenario document (JSON text). Unknown keys are
/// errors; every field is checked with a path-qualified message.
ParseResult parse_scenario(const std::string& text);

/// Reads the file and delegates to parse_scenario.
ParseResult load_scenario(const std::filesystem::path& file);

/// Canonical serialization; parse_scenario(serialize_scenario(sc)) reproduces
/// a scenario with an identical trajectory.
std::string serialize_scenario(const Scenario& sc);

/// 17-significant-digit formatting used by all delimited output.
std::string fmt17(double v);

/// Writes scenario.json, timeseries.tsv and per-stride snapshot files.
/// Returns the list of snapshot files written.
std::vector<std::filesystem::path> write_trajectory(const Trajectory& traj, const Scenario& sc,
                                                    const std::filesystem::path& dir, int stride);

StateSnapshot read_snapshot(const std::filesystem::path& file);

struct StoredTrajectory {
  Scenario scenario;
  std::vector<StateSnapshot> states;
  int timeseries_rows = 0;
};

/// Loads a trajectory directory written by write_trajectory.
StoredTrajectory read_trajectory(const std::filesystem::path& dir);

}  // namespace smav
