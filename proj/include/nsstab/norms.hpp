#pragma once

#include <span>
#include <string>
#include <vector>

#include "nsstab/field.hpp"

namespace nsstab {

/// Norms of one field at one time. All squared quantities integrate over the
/// full box volume L^3.
struct NormReport {
  double time = 0.0;
  double l2_sq = 0.0;
  double h1_sq = 0.0;
  double h2_sq = 0.0;
  double grad_l2_sq = 0.0;
  double grad_l3_sq = 0.0;
  double l6_sq = 0.0;
  double sigma = 4.0;
  double w1_sigma = 0.0;

  static std::string csv_header();
  std::string csv_row() const;
};

struct TimeInterval {
  double t0 = 0.0;
  double t1 = 0.0;
};

/// Ordered norm reports of a trajectory, integrated in time by the trapezoid rule.
struct TrajectoryNorms {
  std::vector<NormReport> reports;
  TimeInterval interval;
  std::string quadrature = "trapezoid";
};

/// ‖f‖_{L_p} with the pointwise Euclidean norm over components. p = 2 uses
/// Parseval; other p use quadrature of the trigonometric interpolant on a grid
/// refined twofold. p may be +infinity.
double lp_norm(const Field& field, double p);

/// Σ_{|α|<=s} ‖D^α f‖²_{L2} for s in {0, 1, 2}, evaluated modewise.
double sobolev_norm_sq(const Field& field, int s);

/// ‖∇f‖²_{L2} = Σ_axis ‖∂_axis f‖²_{L2}.
double gradient_l2_sq(const Field& field);

/// ‖f‖_{W¹_σ} = ‖f‖_{L_σ} + ‖∇f‖_{L_σ}, the gradient with its pointwise
/// Frobenius norm.
double w1_sigma_norm(const Field& field, double sigma);

/// All columns of a NormReport for one field.
NormReport norm_report(const Field& field, double sigma = 4.0);

/// Rescales f so that ‖f‖²_{H¹} equals target_h1_sq.
Field normalize_h1(const Field& field, double target_h1_sq);

/// ‖∇f‖²/‖f‖² for a nonzero mean-free field; bounded below by κ² = (2π/L)².
double poincare_ratio(const Field& field);
/// ‖∇f‖²/‖f‖²_{H¹} for a nonzero mean-free field; bounded below by κ²/(1+κ²).
double poincare_ratio_h1(const Field& field);
/// ‖f‖²_{L6}/‖f‖²_{H¹} for a nonzero field.
double embedding_ratio_l6_h1(const Field& field);

/// (∫_{t0}^{t1} n(t)^{p2} dt)^{1/p2} from samples n(t_i) of a spatial norm,
/// trapezoid in time; p2 = +infinity takes the sample maximum. Samples must
/// cover the interval (its end points are sample times up to 1e-9 relative).
double mixed_norm(std::span<const double> times, std::span<const double> spatial_norms, double p2,
                  TimeInterval interval);

/// ‖u‖_{L_{p2}(t0,t1; L_{p1})} over stored snapshots.
double mixed_norm(const std::vector<Field>& snapshots, double p1, double p2, TimeInterval interval);

/// ‖D²u‖ + ‖∂_t u‖ + ‖u‖ in L_{p2}(L_{p1}); D²u is the full Hessian (pointwise
/// Frobenius) and ∂_t u comes from second-order differences of the snapshots.
double w21_norm(const std::vector<Field>& snapshots, double p1, double p2, TimeInterval interval);

}  // namespace nsstab
