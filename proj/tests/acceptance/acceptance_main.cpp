// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "nsstab/calibration.hpp"
#include "nsstab/config.hpp"
#include "nsstab/estimates.hpp"
#include "nsstab/experiment.hpp"
#include "nsstab/norms.hpp"
#include "nsstab/solver.hpp"
#include "nsstab/spectral.hpp"

using namespace nsstab;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("nsstab_acceptance_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

ExperimentSpec load_scenario(const std::string& name) {
  return parse_config(slurp(fs::path(NSSTAB_SCENARIOS) / (name + ".yaml")));
}

Field vec_field(const TorusGrid& g, std::function<std::array<double, 3>(double, double, double)> fn) {
  return to_spectral(sample(g, g.dim() == 2 ? 2 : 3, fn));
}

Field taylor_green(const TorusGrid& g, double amp = 1.0) {
  return vec_field(g, [=](double x, double y, double) {
    return std::array<double, 3>{amp * std::sin(x) * std::cos(y), -amp * std::cos(x) * std::sin(y), 0.0};
  });
}

ForcingSpec forcing_of(std::vector<std::string> comps) {
  std::vector<Expression> e;
  for (const auto& c : comps) e.push_back(Expression::parse(c));
  return ForcingSpec::analytic(std::move(e));
}

SolverConfig solver_config(const TorusGrid& g, Field initial, double nu, double dt, double t_end) {
  SolverConfig c;
  c.grid = g;
  c.initial = std::move(initial);
  c.nu = nu;
  c.dt = dt;
  c.t_end = t_end;
  c.T = t_end;
  c.snapshot_stride = int(std::llround(t_end / dt));
  return c;
}

bool all_pass(const ReportSet& set, std::initializer_list<const char*> ids, std::string& detail) {
  bool ok = true;
  for (const char* id : ids) {
    const InequalityReport* r = set.find(id);
    if (!r) {
      detail += fmt(" %s:missing", id);
      ok = false;
      continue;
    }
    detail += fmt(" %s:%s(%.3g)", id, to_string(r->status).c_str(), r->worst_margin);
    ok = ok && r->status == Status::pass;
  }
  return ok;
}

// 1. Taylor-Green against the exact solution, second order under dt halving.
Outcome ac1() {
  const auto g = make_grid(2 * pi, 32, 2);
  const double nu = 0.1;
  double err[2];
  double wall = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double dt = 1e-3 / (1 << i);
    const auto t0 = Clock::now();
    const Trajectory tr = run_2d_base(solver_config(g, taylor_green(g), nu, dt, 1.0));
    if (i == 0) wall = seconds_since(t0);
    err[i] = max_abs_difference(tr.snapshots.back(), taylor_green_exact(g, nu, 1.0));
  }
  const double ratio = err[0] / err[1];
  return {err[0] <= 1e-6 && ratio >= 3.5 && wall < 30.0,
          fmt("error %.3e at dt=1e-3, %.3e at dt=5e-4, ratio %.2f, %.1f s", err[0], err[1], ratio, wall)};
}

// 2. Discrete energy identity of an unforced 3D run.
Outcome ac2() {
  const auto g = make_grid(2 * pi, 16, 3);
  const double nu = 0.01, dt = 1e-3;
  Field v0 = random_divfree_field(g, 2024, 1.0);
  // amplitude 0.1: root-mean-square velocity of 0.1
  v0 *= 0.1 / std::sqrt(sobolev_norm_sq(v0, 0) / g.volume());
  const Trajectory tr = run_full_3d(solver_config(g, v0, nu, dt, 1000 * dt));
  const auto& d = tr.diagnostics;
  double worst = 0.0;
  for (std::size_t n = 0; n + 1 < d.size(); ++n) {
    const double dE = (d[n + 1].l2_sq - d[n].l2_sq) / dt;
    const double diss = nu * (d[n].grad_l2_sq + d[n + 1].grad_l2_sq);
    worst = std::max(worst, std::abs(dE + diss) / diss);
  }
  return {d.size() == 1001 && worst <= 1e-6, fmt("max relative residual %.3e over %zu steps", worst, d.size() - 1)};
}

// 3. Poincaré ratio over random mean-free fields; the lowest mode attains κ².
Outcome ac3() {
  const double L = 3.0;
  const auto g = make_grid(L, 8, 3);
  const double k2 = std::pow(2 * pi / L, 2);
  std::mt19937_64 rng(99);
  std::normal_distribution<double> normal;
  double lowest = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 1000; ++i) {
    Field f;
    if (i % 2 == 0) {
      f = random_divfree_field(g, 5000 + i, 0.25 + 0.5 * (i % 8));
    } else {
      Field p(g, 3, Representation::physical);
      for (auto& x : p.physical_data()) x = normal(rng);
      f = mean_free(p);
    }
    lowest = std::min(lowest, poincare_ratio(f));
  }
  const Field mode = vec_field(g, [&](double x, double, double) { return std::array<double, 3>{0, std::sin(2 * pi * x / L), 0}; });
  const double lowest_mode = poincare_ratio(mode);
  const bool ok = lowest >= k2 * (1 - 1e-10) && std::abs(lowest_mode - k2) <= 1e-12 * k2;
  return {ok, fmt("min ratio/κ² = %.12f over 1000 fields, lowest mode %.3e off", lowest / k2,
                  std::abs(lowest_mode - k2) / k2)};
}

// 4. Vorticity cancellation over random 2D divergence-free fields.
Outcome ac4() {
  const auto g = make_grid(2 * pi, 32, 2);
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) worst = std::max(worst, vorticity_cancellation_residual(random_divfree_field(g, 700 + i, 0.5 + 0.25 * (i % 8))));
  return {worst <= 1e-9, fmt("max normalized residual %.3e over 500 fields", worst)};
}

// 5. Two-dimensional decay inequalities over 10 windows, tolerances from a dt/2 run.
Outcome ac5() {
  const ExperimentSpec spec = load_scenario("forced-2d");
  const fs::path dir = scratch("forced2d");
  const RunArtifacts art = run_experiment(spec, dir);
  std::string detail;
  const bool ok = all_pass(art.reports, {"3.1", "3.2", "3.3", "3.4", "3.5"}, detail);
  const auto* r32 = art.reports.find("3.2");
  const bool windows = r32 && spec.windows == 10 && spec.T == 1.0;
  const bool tol = spec.checks.dt_halving;
  return {ok && windows && tol, "10 windows, dt-halving tolerances:" + detail};
}

// 6. Mean evolution for constant and sinusoidal mean forcing.
Outcome ac6() {
  const auto g2 = make_grid(2 * pi, 8, 2);
  const auto g3 = make_grid(2 * pi, 8, 3);
  const double nu = 0.1, dt = 0.01, t_end = 2.0;
  double worst = 0.0, worst_exact = 0.0;
  auto check = [&](const Trajectory& tr, const std::function<std::array<double, 3>(double)>& exact) {
    std::vector<MeanVector> fm;
    for (const auto& d : tr.diagnostics) {
      MeanVector m = d.forcing_mean;
      m.time = d.t;
      fm.push_back(m);
    }
    const auto ode = mean_ode_integrate(fm, tr.diagnostics.front().mean, {0.0, t_end});
    for (std::size_t i = 0; i < ode.size(); ++i) {
      const auto e = exact(tr.diagnostics[i].t);
      for (int c = 0; c < 3; ++c) {
        worst = std::max(worst, std::abs(tr.diagnostics[i].mean.value[c] - ode[i].value[c]));
        worst_exact = std::max(worst_exact, std::abs(tr.diagnostics[i].mean.value[c] - e[c]));
      }
    }
  };
  Field v0 = random_divfree_field(g3, 31, 1.0) + vec_field(g3, [](double, double, double) {
               return std::array<double, 3>{0.2, -0.1, 0.05};
             });
  auto c = solver_config(g3, v0, nu, dt, t_end);
  c.forcing = forcing_of({"0.5", "0", "0.25"});
  check(run_full_3d(c), [](double t) { return std::array<double, 3>{0.2 + 0.5 * t, -0.1, 0.05 + 0.25 * t}; });
  c.forcing = forcing_of({"cos(3*t)", "sin(t)", "0"});
  check(run_full_3d(c), [](double t) {
    return std::array<double, 3>{0.2 + std::sin(3 * t) / 3, -0.1 + 1 - std::cos(t), 0.05};
  });

  // the perturbation system carries the mean of u
  const Trajectory base = run_2d_base(solver_config(g2, taylor_green(g2, 0.2), nu, dt, t_end));
  auto p = solver_config(g3, v0, nu, dt, t_end);
  p.forcing = forcing_of({"0.5*cos(t)", "0", "0.1"});
  check(run_perturbation(p, base),
        [](double t) { return std::array<double, 3>{0.2 + 0.5 * std::sin(t), -0.1, 0.05 + 0.1 * t}; });
  return {worst <= 1e-8, fmt("max |mean − integrated forcing| %.3e (analytic antiderivative within %.1e)", worst,
                             worst_exact)};
}

// 7. Split consistency of base + perturbation against the direct 3D run.
double split_error(double dt) {
  const auto g2 = make_grid(2 * pi, 16, 2);
  const auto g3 = make_grid(2 * pi, 16, 3);
  const double nu = 0.1, t_end = 1.0;
  const Field vs0 = taylor_green(g2, 1.0) + 0.3 * random_divfree_field(g2, 12, 2.0);
  const Field u0 = 0.2 * random_divfree_field(g3, 13, 2.0);
  auto bc = solver_config(g2, vs0, nu, dt, t_end);
  bc.snapshot_stride = 1;
  bc.forcing = forcing_of({"0.2*sin(2*x2)", "0.1*cos(x1)*cos(t)"});
  const Trajectory base = run_2d_base(bc);
  auto pc = solver_config(g3, u0, nu, dt, t_end);
  pc.forcing = forcing_of({"0", "0.05*sin(x1+x3)", "0.05*cos(x2)"});
  const Trajectory pert = run_perturbation(pc, base);
  auto dc = solver_config(g3, lift_to_3d(vs0) + u0, nu, dt, t_end);
  dc.forcing = forcing_of({"0.2*sin(2*x2) + 0", "0.1*cos(x1)*cos(t) + 0.05*sin(x1+x3)", "0.05*cos(x2)"});
  const Trajectory direct = run_full_3d(dc);
  const Field split = lift_to_3d(base.snapshots.back()) + pert.snapshots.back();
  return std::sqrt(sobolev_norm_sq(direct.snapshots.back() - split, 0));
}

Outcome ac7() {
  const double e1 = split_error(1e-3);
  const double e2 = split_error(5e-4);
  const double order = std::log2(e1 / e2);
  return {e1 <= 1e-5 && order >= 2.0 - 0.05,
          fmt("‖v_direct − (v_s+u)‖ = %.3e at dt=1e-3, %.3e at dt=5e-4, observed order %.2f", e1, e2, order)};
}

// 8. Stability conclusion of the bundled scenario.
Outcome ac8() {
  const ExperimentSpec spec = load_scenario("stability-smoke");
  const fs::path dir = scratch("stability");
  const auto t0 = Clock::now();
  const RunArtifacts art = run_experiment(spec, dir);
  const double wall = seconds_since(t0);
  const ResolvedBudget b = resolve_budget(spec);
  std::string detail;
  const bool hyp = all_pass(art.reports, {"4.19", "4.12-X0", "4.12-G", "4.26-A", "4.26-G", "4.27"}, detail);
  const bool concl = all_pass(art.reports, {"4.13", "4.13-envelope", "4.25"}, detail);
  const bool setup = spec.windows == 5 && spec.N == 16 && b.calibration.has_value() &&
                     std::abs(b.stability.gamma - 0.5 * b.stability.gamma_star) <= 1e-15 * b.stability.gamma_star;
  return {hyp && concl && setup && wall < 300.0, fmt("%.1f s, calibrated c3 %.4g, γ/γ* = %.3f;", wall, b.stability.c3,
                                                     b.stability.gamma / b.stability.gamma_star) + detail};
}

// 9. Reduced Grönwall case A = G = 0.
Outcome ac9() {
  ExperimentSpec spec = load_scenario("stability-smoke");
  const ResolvedBudget rb = resolve_budget(spec);
  const StabilityBudget& b = rb.stability;
  const auto g2 = make_grid(spec.L, spec.N, 2);
  const auto g3 = make_grid(spec.L, spec.N, 3);
  const double dt = spec.dt, t_end = b.T;
  auto bc = solver_config(g2, Field(g2, 2, Representation::spectral), b.nu, dt, t_end);
  bc.snapshot_stride = 1;
  const Trajectory base = run_2d_base(bc);
  Field u0 = normalize_h1(random_divfree_field(g3, 77, 1.0), 0.5 * b.gamma);
  const Trajectory pert = run_perturbation(solver_config(g3, u0, b.nu, dt, t_end), base);
  const StabilitySeries s = stability_series(pert.diagnostics, b, 0, dt);
  double worst = -std::numeric_limits<double>::infinity();
  double maxA = 0.0, maxG = 0.0;
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    const double bound = s.X2.front() * std::exp(-b.c_star * s.times[i] / 2) * (1 + 1e-3);
    worst = std::max(worst, s.X2[i] / bound);
    maxA = std::max(maxA, s.A2[i]);
    maxG = std::max(maxG, s.G2[i]);
  }
  const Envelope env = gronwall_envelope(s, b, s.X2.front());
  double env_err = 0.0;
  for (std::size_t i = 0; i < env.times.size(); ++i)
    env_err = std::max(env_err, std::abs(env.values[i] - s.X2.front() * std::exp(-b.c_star * env.times[i] / 2)) /
                                    env.values[i]);
  return {maxA == 0.0 && maxG == 0.0 && worst <= 1.0 && env_err <= 1e-12,
          fmt("max X²(t)/(X²(0)e^{−c*t/2}(1+1e-3)) = %.3e over t ∈ [0, %g], envelope closed form within %.1e", worst,
              t_end, env_err)};
}

// 10. Scalar evaluators against formulas written out here.
Outcome ac10() {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> u(0.05, 2.0);
  double worst = 0.0;
  auto rel = [&](double a, double b) { worst = std::max(worst, std::abs(a - b) / std::max(std::abs(b), 1e-300)); };
  for (int i = 0; i < 50; ++i) {
    const double nu = u(rng), T = u(rng), cs1 = 0.5 * u(rng), c1 = 0.5 * u(rng), c3 = 0.05 * u(rng);
    const double sup = u(rng), grad0 = u(rng);
    // explicit smallness condition
    const Eq411 e = eq411_sides(nu, T, cs1, c1, c3, sup, grad0);
    const double q = std::exp(-nu * cs1 * T);
    rel(e.lhs, sup * (2 - q) / (nu * cs1 * (1 - q)) + grad0);
    rel(e.rhs, nu * nu * c1 * c1 * T / (8 * c3));
    // dissipation budget
    const double c4 = u(rng), c5 = 10 * u(rng), cstar = 0.5 * nu * c4 * u(rng) / 2.0, gs = 0.1 * u(rng);
    rel(eq419_margin(nu, c4, c5, gs, cstar) + c5 * gs * gs / (nu * nu * nu) + cstar / 2, nu * c4);
    // per-window integrals and the sum condition
    const double alpha = 0.5 * u(rng) / 2.0, gamma = 0.01 * u(rng);
    StabilityBudget b;
    b.nu = nu;
    b.T = T;
    b.c4 = c4;
    b.c5 = c5;
    b.c_star = cstar;
    b.gamma_star = gs;
    b.gamma = gamma;
    b.alpha = alpha;
    StabilitySeries s;
    const double iA = 0.1 * u(rng), iG = 0.01 * u(rng);
    s.times = {0.0, T};
    s.X2 = {0.0, 0.0};
    s.Y2 = s.Z2 = s.X2;
    s.A2 = {iA / T, iA / T};
    s.G2 = {iG / T, iG / T};
    s.int_A2 = {0.0, iA};
    s.int_G2 = {0.0, iG};
    const ReportSet h = check_stability_hypotheses({s}, b);
    rel(h.find("4.26-A")->margins[0] + iA, cstar * T / 4);
    rel(h.find("4.26-G")->margins[0] + iG, alpha * gamma);
    const double x = cstar * T / 4;
    rel(eq427_lhs(alpha, cstar, T), alpha * std::exp(x) + std::exp(-x));
    rel(h.find("4.27")->margins[0], 1 - (alpha * std::exp(x) + std::exp(-x)));
  }
  return {worst <= 1e-12, fmt("max relative deviation %.2e over 50 tuples", worst)};
}

// 11. Identical config and seed give byte-identical diagnostics.
Outcome ac11() {
  ExperimentSpec spec = load_scenario("stability-smoke");
  spec.scenario = "determinism";
  spec.T = 0.4;
  spec.windows = 2;
  spec.checks.dt_halving = false;
  spec.budget.ensemble = 100;
  spec.direct.enabled = true;
  spec.perturbation.initial = FieldSource{};
  spec.perturbation.initial.kind = FieldSource::Kind::random;
  spec.perturbation.initial.h1_sq = 1e-4;
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  run_experiment(spec, a);
  run_experiment(spec, b);
  int files = 0;
  bool same = true;
  for (const char* run : {"base", "perturbation", "direct"}) {
    for (const char* f : {"diagnostics.csv"}) {
      const fs::path pa = a / run / f, pb = b / run / f;
      if (!fs::exists(pa) || !fs::exists(pb)) {
        same = false;
        continue;
      }
      ++files;
      same = same && slurp(pa) == slurp(pb);
    }
  }
  same = same && slurp(a / "windows.csv") == slurp(b / "windows.csv");
  return {same && files == 3, fmt("%d diagnostic CSVs and windows.csv compared", files)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria{
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4},   {"AC5", ac5},  {"AC6", ac6},
      {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9}, {"AC10", ac10}, {"AC11", ac11}};
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s %s [%.1f s]\n", name, o.pass ? "PASS" : "FAIL", o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
