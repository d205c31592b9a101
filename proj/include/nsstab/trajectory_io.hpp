#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nsstab/solver.hpp"

namespace nsstab {

/// Run metadata stored next to a trajectory in summary.json.
struct TrajectoryMeta {
  // copy of the configuration that produced the run
  std::string config_text;
  bool aborted = false;
  double abort_time = 0.0;
  std::string abort_report;
  // written verbatim under "convergence" when not empty (a JSON object)
  std::string convergence_json;
};

std::string diagnostics_csv(const std::vector<StepDiagnostics>& diags);
std::vector<StepDiagnostics> parse_diagnostics_csv(const std::string& text);

/// Writes config.yaml, snapshots/snap_NNNNNN.bin (NNNNNN = step index),
/// diagnostics.csv and summary.json into dir. Every disk_stride-th stored
/// snapshot goes to disk.
void write_trajectory(const std::filesystem::path& dir, const Trajectory& traj, const TrajectoryMeta& meta,
                      int disk_stride = 1);

/// Reads a directory written by write_trajectory. Throws std::runtime_error
/// when a required file is missing or malformed.
Trajectory read_trajectory(const std::filesystem::path& dir, TrajectoryMeta* meta = nullptr);

}  // namespace nsstab
