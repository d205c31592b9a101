#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nsstab/calibration.hpp"
#include "nsstab/config.hpp"
#include "nsstab/estimates.hpp"
#include "nsstab/report_io.hpp"
#include "nsstab/solver.hpp"

namespace nsstab {

/// Every constant an experiment's checks depend on.
struct ResolvedBudget {
  StabilityBudget stability;
  double c_s1 = 0.0;
  // set when c3 came from an ensemble
  std::optional<CalibratedConstants> calibration;
};

/// Fills unset budget entries: c1 sharp, c3 from an ensemble, c4 and c5 from
/// derive_c4_c5, c* = c_star_fraction·νc4, γ* the largest admissible value,
/// γ = gamma_fraction·γ*, α = 0.9·e^{−x}(1 − e^{−x}) with x = c*T/4.
/// Throws ConfigError when the result violates condition 4.19 or γ > γ*.
/// Without a perturbation run only c_s1 is filled in.
ResolvedBudget resolve_budget(const ExperimentSpec& spec);

/// Initial fields and forcings of the runs described by a spec.
SolverConfig base_config(const ExperimentSpec& spec);
SolverConfig perturbation_config(const ExperimentSpec& spec);
SolverConfig direct_config(const ExperimentSpec& spec);

struct ExperimentRuns {
  Trajectory base;
  std::optional<Trajectory> perturbation;
  std::optional<Trajectory> direct;
  std::map<std::string, double> seconds;
};

/// Runs base, perturbation and direct systems with step spec.dt. Base
/// snapshots are kept every step; the others every spec.snapshot_stride steps.
ExperimentRuns simulate(const ExperimentSpec& spec);

/// Every snapshot_stride-th snapshot of a trajectory.
Trajectory subsample(const Trajectory& traj, int stride);

struct Analysis {
  ReportSet reports;
  std::vector<WindowRow> windows;
  TwoDBudget two;
  std::optional<LemmaFourOneBudget> lemma41;
};

/// All checks on runs whose snapshots are spaced spec.snapshot_stride steps
/// apart (base included). Without tolerance constants every report uses the
/// 1e-9 floor; with them, C·dt² + 1e-9 per report id.
Analysis analyse(const ExperimentSpec& spec, const ExperimentRuns& runs, const ResolvedBudget& budget,
                 const std::map<std::string, double>* tolerance_constants = nullptr);

/// Turns failed premises of conditional statements into vacuous reports.
void mark_premises(ReportSet& set);

struct RunOptions {
  // dt, dt/2 and dt/4 convergence study
  bool dt_halving_study = false;
};

struct RunArtifacts {
  std::filesystem::path dir;
  std::filesystem::path base_dir;
  std::filesystem::path perturbation_dir;
  std::filesystem::path direct_dir;
  std::filesystem::path inequalities;
  std::filesystem::path windows_csv;
  std::filesystem::path summary;
  std::filesystem::path run_json;
  std::string config_hash;
  double wall_seconds = 0.0;
  ReportSet reports;
  int exit_code = 0;
};

/// Simulates, checks and writes every artifact into out_dir. Blow-up and
/// coverage errors are rethrown after the partial trajectories and a run.json
/// with status "aborted" have been written.
RunArtifacts run_experiment(const ExperimentSpec& spec, const std::filesystem::path& out_dir,
                            const RunOptions& options = {});

/// Re-runs the checks on trajectories stored by run_experiment and rewrites
/// inequalities.json, windows.csv and summary.txt.
RunArtifacts verify_experiment(const std::filesystem::path& out_dir);

/// Reads inequalities.json, returns the summary table and exit code (0 all
/// pass or vacuous, 1 any fail, 2 missing or empty artifacts).
int emit_report(const std::filesystem::path& out_dir, std::string& text);

struct SweepMember {
  std::string name;
  ExperimentSpec spec;
  double gamma_fraction = 0.0;
  double T = 0.0;
  double forcing_scale = 1.0;
};

/// Cartesian product of the sweep axes; absent axes keep the base value.
std::vector<SweepMember> sweep_members(const ExperimentSpec& spec);

struct SweepResult {
  SweepMember member;
  int exit_code = 0;
  std::string error;
};

/// Runs the members concurrently, at most `parallel` at a time, each into
/// out_dir/<name>, and writes out_dir/sweep.csv.
std::vector<SweepResult> run_sweep(const ExperimentSpec& spec, const std::filesystem::path& out_dir, int parallel);

}  // namespace nsstab
