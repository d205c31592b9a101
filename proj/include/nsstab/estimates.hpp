#pragma once

#include <map>
#include <string>
#include <vector>

#include "nsstab/field.hpp"
#include "nsstab/solver.hpp"

namespace nsstab {

enum class Status { pass, fail, vacuous, info };
std::string to_string(Status s);

/// Margins (right side minus left side) of one inequality at its sample times.
struct InequalityReport {
  std::string id;
  std::string description;
  std::vector<double> times;
  std::vector<double> margins;
  double tolerance = 1e-9;
  Status status = Status::pass;
  double worst_margin = 0.0;
  double worst_time = 0.0;
  std::string note;

  /// Recomputes worst margin and status (pass ⇔ every margin >= −tolerance)
  /// unless the report is vacuous or informational.
  void evaluate();
};

InequalityReport make_report(std::string id, std::string description, std::vector<double> times,
                             std::vector<double> margins, double tolerance = 1e-9);

/// Reports in insertion order.
struct ReportSet {
  std::vector<InequalityReport> reports;

  void add(InequalityReport r) { reports.push_back(std::move(r)); }
  void append(const ReportSet& other);
  const InequalityReport* find(const std::string& id) const;
  bool any_fail() const;
  /// Marks every non-informational report vacuous with the given note.
  void make_vacuous(const std::string& note);
};

/// Sample layout of the windows [kT, (k+1)T]: window k spans the diagnostic
/// samples k·S .. (k+1)·S.
struct Windows {
  int samples_per_window = 0;
  int count = 0;
};
Windows make_windows(const std::vector<StepDiagnostics>& diags, double dt, double T);

/// ∫ of a sampled quantity over [i0, i1] by the trapezoid rule.
double trapezoid(const std::vector<double>& t, const std::vector<double>& y, std::size_t i0, std::size_t i1);

/// Sharp torus Poincaré constant κ²/(1+κ²), κ = 2π/L.
double sharp_poincare_constant(double L);

struct TwoDBudget {
  double nu = 0.0;
  double T = 0.0;
  double c_s1 = 0.0;
  double A1_sq = 0.0;
  double A2_sq = 0.0;
  double A3_sq = 0.0;
  double A4_sq = 0.0;
  double A5_sq = 0.0;
  int k_max = 0;
  // ∫_{kT}^{(k+1)T} ‖f̄_s‖²_{L2} per window
  std::vector<double> window_forcing;

  bool operator==(const TwoDBudget&) const = default;
};

/// A₁…A₅ with the supremum over windows taken over the simulated windows.
TwoDBudget compute_A_constants(const std::vector<StepDiagnostics>& base, double nu, double T, double dt,
                               double c_s1);

/// Window bounds and the differential energy inequalities of the 2D flow:
/// "3.1", "3.2", "3.3", "3.4", "3.5".
ReportSet verify_decay_2d(const std::vector<StepDiagnostics>& base, const TwoDBudget& budget, double dt);

/// |∫ v_s·∇v̄_s·Δv̄_s| / (‖v_s‖_{H¹}‖v̄_s‖²_{H²}) for a divergence-free field on
/// a 2D grid; zero for a zero field.
double vorticity_cancellation_residual(const Field& vs);

/// "3.6": the cancellation residual of every base snapshot stays below threshold.
InequalityReport vorticity_cancellation_check(const Trajectory& base, double threshold = 1e-9);

/// "3.8": window maxima of ‖v_s‖_{W¹_σ} never exceed the first window's
/// maximum by more than the relative tolerance.
InequalityReport w1sigma_monitor(const Trajectory& base, double sigma, double relative_tolerance = 0.05);

/// "2.1"/"2.2": the k = 0 coefficient follows the integrated mean forcing.
InequalityReport mean_evolution_check(const std::string& id, const std::vector<StepDiagnostics>& diags,
                                      double threshold = 1e-8);

struct LemmaFourOneBudget {
  double B1_sq = 0.0;
  double B2_sq = 0.0;
  // B₂² with the exponent built from A₃² instead of A₅²
  double B2_sq_A3 = 0.0;
  double B3_sq = 0.0;
  double B4_sq = 0.0;
  double assumption2_margin = 0.0;
  double eq411_lhs = 0.0;
  double eq411_rhs = 0.0;
  bool hypotheses_hold = false;

  bool operator==(const LemmaFourOneBudget&) const = default;
};

/// Left and right sides of the explicit form of assumption 2.
struct Eq411 {
  double lhs;
  double rhs;
};
Eq411 eq411_sides(double nu, double T, double c_s1, double c1, double c3, double sup_forcing_integral,
                  double grad_l2_sq_initial);

/// B₁…B₄ of the L2 stability lemma from the perturbation series.
LemmaFourOneBudget compute_B_constants(const std::vector<StepDiagnostics>& pert, const TwoDBudget& two,
                                       double c1, double c3, double grad_l2_sq_base_initial, double dt);

/// "4.1-A2" and "4.11" condition reports.
ReportSet lemma41_condition_reports(const LemmaFourOneBudget& b);

/// "4.1-1" at window boundaries and "4.1-2" along the run; vacuous when the
/// hypotheses fail.
ReportSet verify_l2_stability(const std::vector<StepDiagnostics>& pert, const LemmaFourOneBudget& b, double dt,
                              double T);

struct StabilityBudget {
  double gamma = 0.0;
  double gamma_star = 0.0;
  double c_star = 0.0;
  double alpha = 0.0;
  double c1 = 0.0;
  double c3 = 0.0;
  double c4 = 0.0;
  double c5 = 0.0;
  double T = 0.0;
  double nu = 0.0;

  bool operator==(const StabilityBudget&) const = default;
};

/// νc₄ − (c₅/ν³)γ*² − c*/2, nonnegative under the smallness condition on γ*.
double eq419_margin(double nu, double c4, double c5, double gamma_star, double c_star);
/// Largest γ* with eq419_margin >= 0.
double gamma_star_limit(double nu, double c4, double c5, double c_star);
/// α·e^{x} + e^{−c*T/4} with x = c*T/4 (the lemma's condition).
double eq427_lhs(double alpha, double c_star, double T);
/// The substituted window-endpoint bound e^{∫A²}∫G² + e^{−c*T/2+∫A²}X²(kT).
double eq425_bound(double int_A2, double int_G2, double c_star, double T, double X2_start);

struct StabilitySeries {
  int window = 0;
  std::vector<double> times;
  std::vector<double> X2, Y2, Z2, G2, A2;
  // ∫_{kT}^t A² and ∫_{kT}^t G²
  std::vector<double> int_A2, int_G2;
};

StabilitySeries stability_series(const std::vector<StepDiagnostics>& pert, const StabilityBudget& budget,
                                 int window, double dt);

/// Hypothesis reports: "4.19", "4.19-cstar", "4.19-gamma", "4.12-X0",
/// "4.12-G", "4.26-A", "4.26-G", "4.27", plus informational
/// "4.27-product" and "4.27-data".
ReportSet check_stability_hypotheses(const std::vector<StabilitySeries>& series, const StabilityBudget& budget);
bool hypotheses_hold(const ReportSet& hypotheses);

struct Envelope {
  std::vector<double> times;
  std::vector<double> values;
  bool aborted = false;
  double abort_time = 0.0;
  double endpoint_bound = 0.0;
};

/// Upper envelope E' = (−c*/2 + A²)E + G², E(kT) = X0_sq, integrated with the
/// trapezoid rule on the series grid; flagged aborted once E exceeds γ*.
Envelope gronwall_envelope(const StabilitySeries& series, const StabilityBudget& budget, double X0_sq);

/// "4.13", "4.13-envelope", "4.25"; vacuous unless hypotheses_ok.
ReportSet verify_stability_conclusion(const std::vector<StabilitySeries>& series,
                                      const std::vector<Envelope>& envelopes, const StabilityBudget& budget,
                                      bool hypotheses_ok);

/// C per report id from margins of the same checks at dt and dt/2:
/// C = max|m_dt − m_{dt/2}| / (0.75·dt²).
std::map<std::string, double> estimate_tolerance_constants(const ReportSet& coarse, const ReportSet& fine,
                                                           double dt);
/// tol = C·dt² + 1e-9 per report; statuses are re-evaluated.
void apply_tolerances(ReportSet& set, const std::map<std::string, double>& constants, double dt);

}  // namespace nsstab
