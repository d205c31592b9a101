#include "nsstab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <thread>

#include "nsstab/expression.hpp"
#include "nsstab/norms.hpp"
#include "nsstab/snapshot_io.hpp"
#include "nsstab/spectral.hpp"
#include "nsstab/trajectory_io.hpp"

namespace nsstab {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void dump(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t derived_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Field make_field(const FieldSource& src, const TorusGrid& grid, int comps, const std::map<std::string, double>& consts,
                 std::uint64_t seed) {
  switch (src.kind) {
    case FieldSource::Kind::zero:
      return Field(grid, comps, Representation::spectral);
    case FieldSource::Kind::expression: {
      std::vector<Expression> e;
      for (int c = 0; c < comps; ++c) e.push_back(Expression::parse(src.components.at(c), consts));
      return to_spectral(sample(grid, comps, [&](double x1, double x2, double x3) {
        std::array<double, 3> v{0.0, 0.0, 0.0};
        for (int c = 0; c < comps; ++c) v[c] = e[c](x1, x2, x3, 0.0);
        return v;
      }));
    }
    case FieldSource::Kind::random: {
      Field f = random_divfree_field(grid, src.seed ? src.seed : seed, src.decay);
      if (src.h1_sq >= 0.0) f = src.h1_sq > 0.0 ? normalize_h1(f, src.h1_sq) : Field(grid, comps, Representation::spectral);
      for (int c = 0; c < comps; ++c) f.spectral(c)[0] += src.mean[c];
      return f;
    }
  }
  throw std::logic_error("unknown field source");
}

ForcingSpec make_forcing(const ForcingSource& src, int comps, const std::map<std::string, double>& consts) {
  switch (src.kind) {
    case ForcingSpec::Kind::zero:
      return ForcingSpec::zero();
    case ForcingSpec::Kind::analytic: {
      std::vector<Expression> e;
      for (int c = 0; c < comps; ++c) e.push_back(Expression::parse(src.components.at(c), consts));
      return ForcingSpec::analytic(std::move(e));
    }
    case ForcingSpec::Kind::snapshots: {
      if (!fs::is_directory(src.dir)) throw std::runtime_error("forcing directory " + src.dir + " not found");
      std::vector<fs::path> files;
      for (const auto& e : fs::directory_iterator(src.dir))
        if (e.path().extension() == ".bin") files.push_back(e.path());
      std::sort(files.begin(), files.end());
      if (files.empty()) throw std::runtime_error("forcing directory " + src.dir + " holds no snapshots");
      std::vector<Field> snaps;
      for (const auto& f : files) snaps.push_back(read_snapshot(f));
      return ForcingSpec::from_snapshots(std::move(snaps), src.dir);
    }
  }
  throw std::logic_error("unknown forcing kind");
}

SolverConfig common_config(const ExperimentSpec& spec, int dim) {
  SolverConfig c;
  c.grid = make_grid(spec.L, spec.N, dim);
  c.nu = spec.nu;
  c.dt = spec.dt;
  c.t_end = spec.t_end();
  c.T = spec.T;
  c.scheme = spec.scheme;
  c.sigma = spec.sigma;
  c.blowup_threshold = spec.blowup_threshold;
  c.snapshot_stride = spec.snapshot_stride;
  return c;
}

ExperimentSpec halved(const ExperimentSpec& spec) {
  ExperimentSpec h = spec;
  h.dt = spec.dt / 2.0;
  h.snapshot_stride = spec.snapshot_stride * 2;
  return h;
}

// Fills `runs` one system at a time so a caller can keep what finished.
void simulate_into(const ExperimentSpec& spec, ExperimentRuns& runs) {
  const std::string hash = config_hash(spec);
  auto t0 = Clock::now();
  runs.base = run_2d_base(base_config(spec));
  runs.base.config_hash = hash;
  runs.seconds["base"] = seconds_since(t0);
  if (spec.perturbation.enabled) {
    t0 = Clock::now();
    runs.perturbation = run_perturbation(perturbation_config(spec), runs.base);
    runs.perturbation->config_hash = hash;
    runs.seconds["perturbation"] = seconds_since(t0);
  }
  if (spec.direct.enabled) {
    t0 = Clock::now();
    runs.direct = run_full_3d(direct_config(spec));
    runs.direct->config_hash = hash;
    runs.seconds["direct"] = seconds_since(t0);
  }
}

ExperimentRuns for_analysis(const ExperimentSpec& spec, const ExperimentRuns& runs) {
  ExperimentRuns a;
  a.base = subsample(runs.base, spec.snapshot_stride);
  a.perturbation = runs.perturbation;
  a.direct = runs.direct;
  a.seconds = runs.seconds;
  return a;
}

InequalityReport info_report(std::string id, std::string description, std::vector<double> t, std::vector<double> m,
                             std::string note) {
  auto r = make_report(std::move(id), std::move(description), std::move(t), std::move(m));
  r.status = Status::info;
  r.note = std::move(note);
  return r;
}

InequalityReport split_consistency(const ExperimentRuns& runs) {
  std::vector<double> t, m;
  const auto& pert = *runs.perturbation;
  const auto& direct = *runs.direct;
  const std::size_t n = std::min(pert.snapshots.size(), direct.snapshots.size());
  for (std::size_t i = 0; i < n; ++i) {
    const double time = direct.snapshots[i].time();
    Field diff = direct.snapshots[i];
    diff -= lift_to_3d(runs.base.state_at(time));
    diff -= pert.snapshots[i];
    t.push_back(time);
    m.push_back(1e-5 - std::sqrt(sobolev_norm_sq(diff, 0)));
  }
  return info_report("1.3", "‖v_direct − (v_s + u)‖_{L2} ≤ 1e-5", t, m, "informational; compare under dt-halving");
}

json budget_json(const ResolvedBudget& b, const Analysis& a) {
  json j;
  j["c_s1"] = b.c_s1;
  const auto& s = b.stability;
  if (s.c1 > 0.0) {
    j["stability"] = {{"c1", s.c1},       {"c3", s.c3},         {"c4", s.c4},         {"c5", s.c5},
                      {"gamma", s.gamma}, {"gamma_star", s.gamma_star}, {"c_star", s.c_star}, {"alpha", s.alpha},
                      {"T", s.T},         {"nu", s.nu}};
  }
  if (b.calibration) {
    j["calibration"] = {{"ensemble", b.calibration->ensemble},
                        {"seed", b.calibration->seed},
                        {"theta", b.calibration->theta},
                        {"c3_lower_bound", b.calibration->c3}};
  }
  j["two_d"] = {{"A1_sq", a.two.A1_sq}, {"A2_sq", a.two.A2_sq}, {"A3_sq", a.two.A3_sq}, {"A4_sq", a.two.A4_sq},
                {"A5_sq", a.two.A5_sq}, {"k_max", a.two.k_max}};
  if (a.lemma41) {
    const auto& l = *a.lemma41;
    j["l2_lemma"] = {{"B1_sq", number(l.B1_sq)},
                     {"B2_sq", number(l.B2_sq)},
                     {"B2_sq_A3", number(l.B2_sq_A3)},
                     {"B3_sq", number(l.B3_sq)},
                     {"B4_sq", number(l.B4_sq)},
                     {"assumption2_margin", number(l.assumption2_margin)},
                     {"explicit_lhs", number(l.eq411_lhs)},
                     {"explicit_rhs", number(l.eq411_rhs)},
                     {"hypotheses_hold", l.hypotheses_hold}};
  }
  return j;
}

ResolvedBudget budget_from_json(const json& j) {
  ResolvedBudget b;
  b.c_s1 = j.at("c_s1").get<double>();
  if (j.contains("stability")) {
    const auto& s = j["stability"];
    auto& o = b.stability;
    o.c1 = s.at("c1").get<double>();
    o.c3 = s.at("c3").get<double>();
    o.c4 = s.at("c4").get<double>();
    o.c5 = s.at("c5").get<double>();
    o.gamma = s.at("gamma").get<double>();
    o.gamma_star = s.at("gamma_star").get<double>();
    o.c_star = s.at("c_star").get<double>();
    o.alpha = s.at("alpha").get<double>();
    o.T = s.at("T").get<double>();
    o.nu = s.at("nu").get<double>();
  }
  return b;
}

// ‖x_a − x_b‖_{L2} at the last snapshot time of `a`.
double final_difference(const Trajectory& a, const Trajectory& b) {
  const Field& fa = a.snapshots.back();
  const Field fb = b.state_at(fa.time());
  Field d = fa;
  d -= fb;
  return std::sqrt(sobolev_norm_sq(d, 0));
}

json convergence_entry(double e1, double e2) {
  json j;
  j["error_dt"] = number(e1);
  j["error_dt_half"] = number(e2);
  j["observed_order"] = number(e1 > 0.0 && e2 > 0.0 ? std::log2(e1 / e2) : kNaN);
  return j;
}

struct Written {
  fs::path base, perturbation, direct;
};

Written write_runs(const fs::path& out, const ExperimentSpec& spec, const ExperimentRuns& runs,
                   const std::map<std::string, std::string>& convergence, const std::string& aborted_kind = {},
                   const BlowUpError* blowup = nullptr) {
  Written w;
  const std::string text = emit_config(spec);
  auto meta_for = [&](const std::string& kind) {
    TrajectoryMeta m;
    m.config_text = text;
    auto it = convergence.find(kind);
    if (it != convergence.end()) m.convergence_json = it->second;
    if (blowup && kind == aborted_kind) {
      m.aborted = true;
      m.abort_time = blowup->time();
      m.abort_report = blowup->what();
    }
    return m;
  };
  w.base = out / "base";
  if (!runs.base.snapshots.empty()) write_trajectory(w.base, runs.base, meta_for("base"), spec.snapshot_stride);
  if (runs.perturbation) {
    w.perturbation = out / "perturbation";
    write_trajectory(w.perturbation, *runs.perturbation, meta_for("perturbation"));
  }
  if (runs.direct) {
    w.direct = out / "direct";
    write_trajectory(w.direct, *runs.direct, meta_for("direct"));
  }
  return w;
}

RunArtifacts write_reports(const fs::path& out, const ExperimentSpec& spec, const Analysis& a) {
  RunArtifacts art;
  art.dir = out;
  art.inequalities = out / "inequalities.json";
  art.windows_csv = out / "windows.csv";
  art.summary = out / "summary.txt";
  art.run_json = out / "run.json";
  art.config_hash = config_hash(spec);
  art.reports = a.reports;
  art.exit_code = exit_code(a.reports);
  dump(art.inequalities, inequalities_json(a.reports));
  dump(art.windows_csv, windows_csv(a.windows));
  dump(art.summary, summary_text(a.reports));
  return art;
}

}  // namespace

ResolvedBudget resolve_budget(const ExperimentSpec& spec) {
  ResolvedBudget r;
  r.c_s1 = sharp_poincare_constant(spec.L);
  if (!spec.perturbation.enabled) return r;
  const auto& o = spec.budget;
  const double nu = spec.nu;
  auto& s = r.stability;
  s.T = spec.T;
  s.nu = nu;
  s.c1 = o.c1.value_or(r.c_s1);
  if (o.c3) {
    s.c3 = *o.c3;
  } else {
    r.calibration = calibrate_constants(make_grid(spec.L, spec.N, 3), o.ensemble, spec.seed, o.theta);
    s.c3 = r.calibration->c3;
  }
  DerivedConstants d;
  if (!o.c4 || !o.c5) d = derive_c4_c5(s.c1, s.c3, spec.L, o.theta);
  s.c4 = o.c4.value_or(d.c4);
  s.c5 = o.c5.value_or(d.c5);
  s.c_star = o.c_star.value_or(o.c_star_fraction * nu * s.c4);
  if (!(s.c_star < nu * s.c4)) throw ConfigError("budget refused: condition 4.19 requires c* < νc4");
  s.gamma_star = o.gamma_star.value_or(gamma_star_limit(nu, s.c4, s.c5, s.c_star));
  if (eq419_margin(nu, s.c4, s.c5, s.gamma_star, s.c_star) < -1e-12 * nu * s.c4) {
    throw ConfigError("budget refused: condition 4.19 requires νc4 − (c5/ν³)γ*² >= c*/2");
  }
  s.gamma = o.gamma.value_or(o.gamma_fraction * s.gamma_star);
  if (s.gamma > s.gamma_star) throw ConfigError("budget refused: γ exceeds γ* (condition 4.19)");
  const double x = s.c_star * s.T / 4.0;
  s.alpha = o.alpha.value_or(0.9 * std::exp(-x) * (1.0 - std::exp(-x)));
  return r;
}

SolverConfig base_config(const ExperimentSpec& spec) {
  SolverConfig c = common_config(spec, 2);
  const auto consts = spec.expression_constants();
  c.snapshot_stride = 1;
  c.initial = make_field(spec.base.initial, c.grid, 2, consts, derived_seed(spec.seed, 1));
  c.forcing = make_forcing(spec.base.forcing, 2, consts);
  return c;
}

SolverConfig perturbation_config(const ExperimentSpec& spec) {
  SolverConfig c = common_config(spec, 3);
  const auto consts = spec.expression_constants();
  c.initial = make_field(spec.perturbation.initial, c.grid, 3, consts, derived_seed(spec.seed, 2));
  c.forcing = make_forcing(spec.perturbation.forcing, 3, consts);
  return c;
}

SolverConfig direct_config(const ExperimentSpec& spec) {
  SolverConfig c = common_config(spec, 3);
  const auto consts = spec.expression_constants();
  const SolverConfig b = base_config(spec);
  const SolverConfig p = perturbation_config(spec);
  c.initial = lift_to_3d(b.initial);
  c.initial += p.initial;

  const auto& fb = spec.base.forcing;
  const auto& fp = spec.perturbation.forcing;
  if (fb.kind == ForcingSpec::Kind::snapshots || fp.kind == ForcingSpec::Kind::snapshots) {
    throw std::invalid_argument("direct run: snapshot forcing cannot be summed");
  }
  if (fb.kind == ForcingSpec::Kind::zero && fp.kind == ForcingSpec::Kind::zero) {
    c.forcing = ForcingSpec::zero();
    return c;
  }
  std::vector<Expression> sum;
  for (int i = 0; i < 3; ++i) {
    const std::string a = fb.kind == ForcingSpec::Kind::analytic && i < 2 ? fb.components.at(i) : "0";
    const std::string g = fp.kind == ForcingSpec::Kind::analytic ? fp.components.at(i) : "0";
    sum.push_back(Expression::parse("(" + a + ")+(" + g + ")", consts));
  }
  c.forcing = ForcingSpec::analytic(std::move(sum));
  return c;
}

ExperimentRuns simulate(const ExperimentSpec& spec) {
  ExperimentRuns runs;
  simulate_into(spec, runs);
  return runs;
}

Trajectory subsample(const Trajectory& traj, int stride) {
  if (stride < 1) throw std::invalid_argument("subsample: stride must be >= 1");
  Trajectory out = traj;
  out.snapshots.clear();
  for (std::size_t i = 0; i < traj.snapshots.size(); i += std::size_t(stride)) out.snapshots.push_back(traj.snapshots[i]);
  out.snapshot_stride = traj.snapshot_stride * stride;
  return out;
}

void mark_premises(ReportSet& set) {
  static const char* premises[] = {"4.1-A2", "4.11",   "4.19",   "4.19-cstar", "4.19-gamma",
                                   "4.12-X0", "4.12-G", "4.26-A", "4.26-G",     "4.27"};
  for (auto& r : set.reports) {
    if (r.status != Status::fail) continue;
    if (std::find(std::begin(premises), std::end(premises), r.id) == std::end(premises)) continue;
    r.status = Status::vacuous;
    r.note = r.note.empty() ? "premise not satisfied by the data" : r.note + "; premise not satisfied by the data";
  }
}

Analysis analyse(const ExperimentSpec& spec, const ExperimentRuns& runs, const ResolvedBudget& budget,
                 const std::map<std::string, double>* constants) {
  const double dt = spec.dt;
  auto finish = [&](ReportSet set) {
    if (constants) apply_tolerances(set, *constants, dt);
    return set;
  };
  auto finish_one = [&](InequalityReport r) {
    ReportSet s;
    s.add(std::move(r));
    return finish(std::move(s));
  };

  Analysis a;
  const auto& bd = runs.base.diagnostics;
  a.two = compute_A_constants(bd, spec.nu, spec.T, dt, budget.c_s1);
  a.reports.append(finish(verify_decay_2d(bd, a.two, dt)));
  a.reports.append(finish_one(vorticity_cancellation_check(runs.base, spec.checks.vorticity_threshold)));
  a.reports.append(finish_one(w1sigma_monitor(runs.base, spec.sigma, spec.checks.w1sigma_relative_tolerance)));
  a.reports.append(finish_one(mean_evolution_check("2.1", bd, spec.checks.mean_threshold)));

  const Windows w = make_windows(bd, dt, spec.T);
  for (int k = 0; k < w.count; ++k) {
    const std::size_t i0 = std::size_t(k) * w.samples_per_window;
    const std::size_t i1 = i0 + w.samples_per_window;
    WindowRow row;
    row.window = k;
    row.t0 = bd[i0].t;
    row.t1 = bd[i1].t;
    row.base_l2_sq_end = bd[i1].l2_sq;
    row.base_grad_l2_sq_end = bd[i1].grad_l2_sq;
    row.base_forcing_integral = a.two.window_forcing[k];
    row.X2_start = row.X2_end = row.X2_max = row.int_A2 = row.int_G2 = row.endpoint_bound = kNaN;
    a.windows.push_back(row);
  }

  if (runs.perturbation) {
    const auto& pd = runs.perturbation->diagnostics;
    const auto& sb = budget.stability;
    const LemmaFourOneBudget B = compute_B_constants(pd, a.two, sb.c1, sb.c3, bd.front().grad_l2_sq, dt);
    a.lemma41 = B;
    a.reports.append(finish(lemma41_condition_reports(B)));
    a.reports.append(finish(verify_l2_stability(pd, B, dt, spec.T)));
    {
      const double bound = B.B2_sq_A3 / (1.0 - std::exp(-spec.nu * sb.c1 * spec.T / 2.0)) + pd.front().l2_sq;
      std::vector<double> t, m;
      for (int k = 0; k <= w.count; ++k) {
        const auto& d = pd[std::size_t(k) * w.samples_per_window];
        t.push_back(d.t);
        m.push_back(bound - d.l2_sq);
      }
      a.reports.append(finish_one(info_report("4.1-1-A3", "‖ū(kT)‖² ≤ B₃² with the B₂² exponent built from A₃²", t,
                                              m, "alternative reading of the B₂² exponent")));
    }
    a.reports.append(finish_one(mean_evolution_check("2.2", pd, spec.checks.mean_threshold)));

    std::vector<StabilitySeries> series;
    for (int k = 0; k < w.count; ++k) series.push_back(stability_series(pd, sb, k, dt));
    ReportSet hyp = finish(check_stability_hypotheses(series, sb));
    const bool ok = hypotheses_hold(hyp);
    std::vector<Envelope> env;
    for (const auto& s : series) env.push_back(gronwall_envelope(s, sb, s.X2.front()));
    a.reports.append(hyp);
    a.reports.append(finish(verify_stability_conclusion(series, env, sb, ok)));

    for (int k = 0; k < w.count; ++k) {
      auto& row = a.windows[k];
      const auto& s = series[k];
      row.X2_start = s.X2.front();
      row.X2_end = s.X2.back();
      row.X2_max = *std::max_element(s.X2.begin(), s.X2.end());
      row.int_A2 = s.int_A2.back();
      row.int_G2 = s.int_G2.back();
      row.endpoint_bound = env[k].endpoint_bound;
      row.envelope_aborted = env[k].aborted;
    }
  }
  if (runs.perturbation && runs.direct) a.reports.append(finish_one(split_consistency(runs)));
  mark_premises(a.reports);
  return a;
}

RunArtifacts run_experiment(const ExperimentSpec& spec, const fs::path& out, const RunOptions& options) {
  const auto start = Clock::now();
  fs::create_directories(out);
  const std::string hash = config_hash(spec);
  dump(out / "config.yaml", emit_config(spec));

  json run;
  run["scenario"] = spec.scenario;
  run["config_hash"] = hash;
  run["seed"] = spec.seed;
  run["dt"] = spec.dt;

  auto t0 = Clock::now();
  const ResolvedBudget budget = resolve_budget(spec);
  const double budget_seconds = seconds_since(t0);

  ExperimentRuns runs;
  try {
    simulate_into(spec, runs);
  } catch (const BlowUpError& e) {
    ExperimentRuns partial = runs;
    const std::string kind = e.partial().kind;
    if (kind == "base") partial.base = e.partial();
    if (kind == "perturbation") partial.perturbation = e.partial();
    if (kind == "direct") partial.direct = e.partial();
    write_runs(out, spec, partial, {}, kind, &e);
    run["status"] = "aborted";
    run["error"] = e.what();
    run["abort_time"] = e.time();
    dump(out / "run.json", run.dump(2) + "\n");
    throw;
  } catch (const std::exception& e) {
    write_runs(out, spec, runs, {});
    run["status"] = "aborted";
    run["error"] = e.what();
    dump(out / "run.json", run.dump(2) + "\n");
    throw;
  }

  std::map<std::string, double> constants;
  std::map<std::string, std::string> convergence;
  double halving_seconds = 0.0;
  Analysis coarse = analyse(spec, for_analysis(spec, runs), budget);
  if (spec.checks.dt_halving || options.dt_halving_study) {
    t0 = Clock::now();
    const ExperimentSpec half = halved(spec);
    const ExperimentRuns fine_runs = simulate(half);
    const Analysis fine = analyse(half, for_analysis(half, fine_runs), budget);
    constants = estimate_tolerance_constants(coarse.reports, fine.reports, spec.dt);
    if (options.dt_halving_study) {
      const ExperimentRuns finest = simulate(halved(half));
      convergence["base"] = convergence_entry(final_difference(runs.base, fine_runs.base),
                                              final_difference(fine_runs.base, finest.base))
                                .dump();
      if (runs.perturbation) {
        convergence["perturbation"] =
            convergence_entry(final_difference(*runs.perturbation, *fine_runs.perturbation),
                              final_difference(*fine_runs.perturbation, *finest.perturbation))
                .dump();
      }
      if (runs.direct) {
        convergence["direct"] = convergence_entry(final_difference(*runs.direct, *fine_runs.direct),
                                                  final_difference(*fine_runs.direct, *finest.direct))
                                    .dump();
      }
    }
    halving_seconds = seconds_since(t0);
  }
  t0 = Clock::now();
  const Analysis analysis = constants.empty() ? coarse : analyse(spec, for_analysis(spec, runs), budget, &constants);
  const double analysis_seconds = seconds_since(t0);

  const Written w = write_runs(out, spec, runs, convergence);
  RunArtifacts art = write_reports(out, spec, analysis);
  art.base_dir = w.base;
  art.perturbation_dir = w.perturbation;
  art.direct_dir = w.direct;

  run["status"] = "complete";
  run["budget"] = budget_json(budget, analysis);
  json tc = json::object();
  for (const auto& [id, c] : constants) tc[id] = number(c);
  run["tolerance_constants"] = tc;
  json timings;
  timings["budget"] = budget_seconds;
  for (const auto& [k, v] : runs.seconds) timings[k] = v;
  timings["dt_halving"] = halving_seconds;
  timings["analysis"] = analysis_seconds;
  art.wall_seconds = seconds_since(start);
  timings["total"] = art.wall_seconds;
  run["timings"] = timings;
  json statuses = json::object();
  for (const auto& r : analysis.reports.reports) statuses[r.id] = to_string(r.status);
  run["statuses"] = statuses;
  if (!convergence.empty()) {
    json c = json::object();
    for (const auto& [k, v] : convergence) c[k] = json::parse(v);
    run["convergence"] = c;
  }
  run["exit_code"] = art.exit_code;
  dump(art.run_json, run.dump(2) + "\n");
  return art;
}

RunArtifacts verify_experiment(const fs::path& out) {
  if (!fs::is_directory(out)) throw std::runtime_error("no artifact directory " + out.string());
  const ExperimentSpec spec = parse_config(slurp(out / "config.yaml"));
  json run;
  try {
    run = json::parse(slurp(out / "run.json"));
  } catch (const json::exception& e) {
    throw std::runtime_error(out.string() + "/run.json: " + e.what());
  }
  if (run.value("status", "") != "complete") throw std::runtime_error("run.json: the run did not complete");
  const ResolvedBudget budget = budget_from_json(run.at("budget"));
  std::map<std::string, double> constants;
  for (const auto& [id, c] : run.at("tolerance_constants").items()) constants[id] = c.is_null() ? 0.0 : c.get<double>();

  ExperimentRuns runs;
  runs.base = read_trajectory(out / "base");
  if (spec.perturbation.enabled) runs.perturbation = read_trajectory(out / "perturbation");
  if (spec.direct.enabled) runs.direct = read_trajectory(out / "direct");
  const Analysis a = analyse(spec, runs, budget, constants.empty() ? nullptr : &constants);
  RunArtifacts art = write_reports(out, spec, a);
  art.base_dir = out / "base";
  if (runs.perturbation) art.perturbation_dir = out / "perturbation";
  if (runs.direct) art.direct_dir = out / "direct";
  return art;
}

int emit_report(const fs::path& out, std::string& text) {
  if (!fs::is_directory(out) || fs::is_empty(out)) {
    text = "error: artifact directory " + out.string() + " is missing or empty\n";
    return 2;
  }
  if (!fs::exists(out / "inequalities.json")) {
    text = "error: " + (out / "inequalities.json").string() + " not found\n";
    return 2;
  }
  ReportSet set;
  try {
    set = parse_inequalities_json(slurp(out / "inequalities.json"));
  } catch (const std::exception& e) {
    text = std::string("error: ") + e.what() + "\n";
    return 2;
  }
  if (set.reports.empty()) {
    text = "error: no inequality reports in " + out.string() + "\n";
    return 2;
  }
  text = summary_text(set);
  return exit_code(set);
}

std::vector<SweepMember> sweep_members(const ExperimentSpec& spec) {
  const auto gfs = spec.sweep.gamma_fraction.empty() ? std::vector<double>{spec.budget.gamma_fraction}
                                                     : spec.sweep.gamma_fraction;
  const auto Ts = spec.sweep.T.empty() ? std::vector<double>{spec.T} : spec.sweep.T;
  const auto scales = spec.sweep.forcing_scale.empty() ? std::vector<double>{1.0} : spec.sweep.forcing_scale;
  std::vector<SweepMember> out;
  for (double gf : gfs) {
    for (double T : Ts) {
      for (double s : scales) {
        SweepMember m;
        m.gamma_fraction = gf;
        m.T = T;
        m.forcing_scale = s;
        char name[160];
        std::snprintf(name, sizeof name, "%s-g%g-T%g-s%g", spec.scenario.c_str(), gf, T, s);
        m.name = name;
        m.spec = spec;
        m.spec.scenario = m.name;
        m.spec.sweep = {};
        m.spec.output.clear();
        m.spec.budget.gamma_fraction = gf;
        if (!spec.sweep.gamma_fraction.empty()) m.spec.budget.gamma.reset();
        m.spec.T = T;
        if (s != 1.0) {
          auto& f = m.spec.perturbation.forcing;
          if (f.kind == ForcingSpec::Kind::snapshots) throw ConfigError("sweep: snapshot forcing cannot be scaled");
          for (auto& c : f.components) c = "(" + format_number(s) + ")*(" + c + ")";
        }
        out.push_back(std::move(m));
      }
    }
  }
  return out;
}

std::vector<SweepResult> run_sweep(const ExperimentSpec& spec, const fs::path& out, int parallel) {
  if (parallel < 1) throw std::invalid_argument("sweep: parallelism must be >= 1");
  const auto members = sweep_members(spec);
  std::vector<SweepResult> results(members.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < members.size(); i = next++) {
      results[i].member = members[i];
      try {
        results[i].exit_code = run_experiment(members[i].spec, out / members[i].name).exit_code;
      } catch (const std::exception& e) {
        results[i].exit_code = 3;
        results[i].error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  const int n = std::min<int>(parallel, int(members.size()));
  for (int i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  fs::create_directories(out);
  std::string csv = "member,gamma_fraction,T,forcing_scale,exit_code,error\n";
  for (const auto& r : results) {
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    csv += r.member.name + "," + format_number(r.member.gamma_fraction) + "," + format_number(r.member.T) + "," +
           format_number(r.member.forcing_scale) + "," + std::to_string(r.exit_code) + "," + err + "\n";
  }
  dump(out / "sweep.csv", csv);
  return results;
}

}  // namespace nsstab
