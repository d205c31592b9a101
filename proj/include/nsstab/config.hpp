#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nsstab/forcing.hpp"
#include "nsstab/solver.hpp"

namespace nsstab {

/// Schema or budget error; the message names the offending line when known.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Initial velocity of one run.
struct FieldSource {
  enum class Kind { zero, expression, random };
  Kind kind = Kind::zero;
  // one expression per component (expression kind)
  std::vector<std::string> components;
  // random kind: 0 derives the seed from the experiment seed
  std::uint64_t seed = 0;
  double decay = 2.0;
  // target ‖ū‖²_{H¹}; negative leaves the amplitude as generated
  double h1_sq = -1.0;
  std::array<double, 3> mean{0.0, 0.0, 0.0};

  bool operator==(const FieldSource&) const = default;
};

struct ForcingSource {
  ForcingSpec::Kind kind = ForcingSpec::Kind::zero;
  std::vector<std::string> components;
  std::string dir;

  bool operator==(const ForcingSource&) const = default;
};

struct RunBlock {
  bool enabled = true;
  FieldSource initial;
  ForcingSource forcing;

  bool operator==(const RunBlock&) const = default;
};

/// Unset entries are derived (see resolve_budget in experiment.hpp).
struct BudgetOverrides {
  std::optional<double> c1, c3, c4, c5, gamma, gamma_star, c_star, alpha;
  double theta = 0.5;
  double c_star_fraction = 0.5;
  double gamma_fraction = 0.5;
  int ensemble = 200;

  bool operator==(const BudgetOverrides&) const = default;
};

struct CheckOptions {
  double vorticity_threshold = 1e-9;
  double w1sigma_relative_tolerance = 0.05;
  double mean_threshold = 1e-8;
  // estimate tolerance constants from a run at dt/2
  bool dt_halving = true;

  bool operator==(const CheckOptions&) const = default;
};

struct SweepAxes {
  std::vector<double> gamma_fraction;
  std::vector<double> T;
  std::vector<double> forcing_scale;

  bool empty() const { return gamma_fraction.empty() && T.empty() && forcing_scale.empty(); }
  bool operator==(const SweepAxes&) const = default;
};

struct ExperimentSpec {
  std::string scenario = "unnamed";
  std::uint64_t seed = 0;
  std::string output;
  double L = 6.283185307179586;
  int N = 16;
  double nu = 0.0;
  double dt = 0.0;
  double T = 1.0;
  int windows = 1;
  TimeScheme scheme = TimeScheme::imex_cn_heun;
  double sigma = 4.0;
  // steps between snapshots written to disk
  int snapshot_stride = 10;
  double blowup_threshold = 1e12;
  // named constants usable in expressions; nu and L are always defined
  std::map<std::string, double> constants;
  RunBlock base;
  RunBlock perturbation{false, {}, {}};
  RunBlock direct{false, {}, {}};
  BudgetOverrides budget;
  CheckOptions checks;
  SweepAxes sweep;

  double t_end() const { return windows * T; }
  /// constants plus nu and L
  std::map<std::string, double> expression_constants() const;
  bool operator==(const ExperimentSpec&) const = default;
};

/// Parses the YAML schema documented in docs/formats.md. Unknown keys, bad
/// values and inconsistent budgets raise ConfigError with the line number.
ExperimentSpec parse_config(const std::string& text);
/// Canonical YAML with every default written out.
std::string emit_config(const ExperimentSpec& spec);
/// FNV-1a 64-bit hash of emit_config, as 16 hex digits.
std::string config_hash(const ExperimentSpec& spec);

/// Refuses budgets violating νc₄ − (c₅/ν³)γ*² ≥ c*/2, c* < νc₄ or γ ≤ γ*.
/// Only the conditions whose inputs are all given are checked.
void check_budget_overrides(const BudgetOverrides& b, double nu);

}  // namespace nsstab
