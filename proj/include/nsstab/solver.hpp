#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nsstab/field.hpp"
#include "nsstab/forcing.hpp"
#include "nsstab/norms.hpp"

namespace nsstab {

enum class TimeScheme {
  // Crank-Nicolson viscosity, Heun predictor-corrector for the nonlinearity
  imex_cn_heun,
  // exact viscous factor e^{-νk²dt}, Heun for the nonlinearity
  integrating_factor,
};

std::string to_string(TimeScheme s);
TimeScheme time_scheme_from_string(const std::string& s);

struct SolverConfig {
  TorusGrid grid;
  double nu = 1.0;
  double dt = 1e-3;
  double t_end = 1.0;
  // window length T of the step-by-step scheme
  double T = 1.0;
  ForcingSpec forcing;
  // initial velocity, mean included
  Field initial;
  int snapshot_stride = 1;
  TimeScheme scheme = TimeScheme::imex_cn_heun;
  // exponent of the W¹_σ monitor
  double sigma = 4.0;
  // abort once ‖v‖²_{L2} exceeds this value
  double blowup_threshold = 1e12;

  int steps() const;
};

/// Scalar diagnostics of one time step. Entries that do not apply to a given
/// run are NaN. Norms refer to the mean-free part of the state.
struct StepDiagnostics {
  double t = 0.0;
  double l2_sq = 0.0;
  double grad_l2_sq = 0.0;
  double h1_sq = 0.0;
  double h2_sq = 0.0;
  MeanVector mean;
  MeanVector ode_mean;
  MeanVector forcing_mean;
  // ‖f̄‖²_{L2} of the mean-free forcing
  double forcing_l2_sq = 0.0;
  // ‖ḡ‖²_{L6/5}
  double forcing_l65_sq = 0.0;
  // ‖∇v̄_s‖²_{L3} of the base flow at this time
  double shear_l3_sq = 0.0;
  double w1_sigma = 0.0;
  double divergence = 0.0;

  static std::string csv_header();
  std::string csv_row() const;
};

/// Time-ordered states of one run. Snapshots are spectral and are kept every
/// snapshot_stride steps (t = 0 included); diagnostics are kept every step.
struct Trajectory {
  std::string kind;
  std::vector<Field> snapshots;
  std::vector<StepDiagnostics> diagnostics;
  double dt = 0.0;
  double nu = 0.0;
  double T = 0.0;
  int snapshot_stride = 1;
  std::string config_hash;

  double t_begin() const;
  double t_end() const;
  std::vector<MeanVector> means() const;

  /// State at time t: a stored snapshot when t is a snapshot time, otherwise
  /// cubic Lagrange interpolation through the four nearest snapshots.
  /// Throws CoverageError outside the stored interval.
  Field state_at(double t) const;
};

class CoverageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a run produces non-finite values or exceeds the blow-up
/// threshold. Carries the trajectory up to the last good step.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(const std::string& report, Trajectory partial, double time)
      : std::runtime_error(report), partial_(std::move(partial)), time_(time) {}
  const Trajectory& partial() const { return partial_; }
  double time() const { return time_; }

 private:
  Trajectory partial_;
  double time_;
};

/// P(−v·∇v + f) + νΔv with the quadratic term dealiased.
Field nse_rhs(const Field& v, const Field& f, double nu);

/// Projected, dealiased nonlinearity plus forcing N(v, t); the viscous term is
/// handled by the scheme.
using NonlinearOperator = std::function<Field(const Field& state, double t)>;

/// One step of the scheme from time t for v_t = νΔv + N(v, t).
Field advance_with(const Field& state, double t, double dt, double nu, TimeScheme scheme,
                   const NonlinearOperator& op);

/// One Navier-Stokes step with forcing f(t) (raw, projected internally).
Field advance(const Field& state, const std::function<Field(double)>& forcing, double nu, double dt, double t = 0.0,
              TimeScheme scheme = TimeScheme::imex_cn_heun);

/// Two-dimensional base flow on a 2D grid (two velocity components).
Trajectory run_2d_base(const SolverConfig& config);

/// Perturbation ū driven by the base flow; config.forcing is g, the initial
/// field is u(0) with its mean. Grids of base and perturbation share L and N.
Trajectory run_perturbation(const SolverConfig& config, const Trajectory& base);

/// Full three-dimensional Navier-Stokes run.
Trajectory run_full_3d(const SolverConfig& config);

/// M(t) = M(t0) + ∫_{t0}^t m(s) ds by the trapezoid rule over the forcing-mean
/// samples in [t0, t1]. Throws CoverageError when the samples do not cover
/// the interval.
std::vector<MeanVector> mean_ode_integrate(std::span<const MeanVector> forcing_means, const MeanVector& initial,
                                           TimeInterval interval);

/// Mean-free pressure solving −Δp = div(v·∇v − f); scalar spectral field.
Field recover_pressure(const Field& v, const Field& f, double nu);

/// (sin x1 cos x2, −cos x1 sin x2[, 0])·e^{−2νt} on a grid with L = 2π.
Field taylor_green_exact(const TorusGrid& grid, double nu, double t);

}  // namespace nsstab
