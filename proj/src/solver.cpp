#include "nsstab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

#include "fft.hpp"
#include "nsstab/spectral.hpp"

namespace nsstab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Field as_spectral(const Field& f) { return f.is_spectral() ? f : to_spectral(f); }

void require_same_grid(const Field& a, const Field& b, const char* who) {
  if (!(a.grid() == b.grid()) || a.components() != b.components()) {
    throw std::invalid_argument(std::string(who) + ": grid or component mismatch");
  }
}

// −∇·S for a symmetric tensor S whose entries are produced pointwise by
// `product(i, j, out)`; one transform per independent entry.
template <class Product>
Field minus_div_symmetric(const TorusGrid& g, int d, Product product) {
  const auto& t = g.tables();
  Field out(g, d, Representation::spectral);
  std::vector<double> buf(g.physical_size());
  std::vector<Complex> hat(g.spectral_size());
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      product(i, j, std::span<double>(buf));
      detail::fft_forward(g.points(), g.dim(), buf, hat);
      auto oi = out.spectral(i);
      for (std::size_t m = 0; m < hat.size(); ++m) oi[m] -= Complex(0.0, t.kd[m][j]) * hat[m];
      if (i != j) {
        auto oj = out.spectral(j);
        for (std::size_t m = 0; m < hat.size(); ++m) oj[m] -= Complex(0.0, t.kd[m][i]) * hat[m];
      }
    }
  }
  return out;
}

// −∇·(v⊗v), not yet projected or truncated.
Field advection(const Field& v) {
  const auto& g = v.grid();
  const int d = g.dim();
  const Field p = to_physical(as_spectral(v));
  return minus_div_symmetric(g, d, [&](int i, int j, std::span<double> out) {
    auto a = p.physical(i);
    auto b = p.physical(j);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = a[k] * b[k];
  });
}

Field project(const Field& f) {
  Field out = dealias(leray_project(f));
  out.set_divergence_free(true);
  return out;
}

// Caches P D f(t) when the forcing does not depend on time.
class ProjectedForcing {
 public:
  explicit ProjectedForcing(const ForcingEvaluator& eval) : eval_(eval) {
    if (!eval_.spec().time_dependent()) {
      cache_ = project(eval_.at(0.0));
      cached_ = true;
    }
  }
  Field at(double t) const { return cached_ ? cache_ : project(eval_.at(t)); }

 private:
  const ForcingEvaluator& eval_;
  bool cached_ = false;
  Field cache_;
};

struct ForcingStats {
  MeanVector mean;
  double l2_sq = 0.0;
  double l65_sq = kNaN;
};

class ForcingStatsCache {
 public:
  ForcingStatsCache(const ForcingEvaluator& eval, bool with_l65) : eval_(eval), with_l65_(with_l65) {
    if (!eval_.spec().time_dependent()) {
      cache_ = compute(0.0);
      cached_ = true;
    }
  }
  ForcingStats at(double t) const {
    ForcingStats s = cached_ ? cache_ : compute(t);
    s.mean.time = t;
    return s;
  }

 private:
  ForcingStats compute(double t) const {
    const Field f = eval_.at(t);
    ForcingStats s;
    s.mean = mean(f);
    const Field fbar = mean_free(f);
    s.l2_sq = sobolev_norm_sq(fbar, 0);
    if (with_l65_) {
      const double n = lp_norm(fbar, 1.2);
      s.l65_sq = n * n;
    }
    return s;
  }

  const ForcingEvaluator& eval_;
  bool with_l65_;
  bool cached_ = false;
  ForcingStats cache_;
};

void fill_state_norms(StepDiagnostics& d, const Field& state) {
  const Field bar = mean_free(state);
  d.l2_sq = sobolev_norm_sq(bar, 0);
  d.grad_l2_sq = gradient_l2_sq(bar);
  d.h1_sq = sobolev_norm_sq(bar, 1);
  d.h2_sq = sobolev_norm_sq(bar, 2);
  d.mean = mean(state);
  d.divergence = relative_divergence(state);
}

double shear_l3_sq(const Field& vs) {
  const double n = lp_norm(gradient(vs), 3.0);
  return n * n;
}

void validate(const SolverConfig& c, int dim, int comps, const char* who) {
  if (!(c.nu > 0.0)) throw std::invalid_argument(std::string(who) + ": nu must be positive");
  if (!(c.dt > 0.0)) throw std::invalid_argument(std::string(who) + ": dt must be positive");
  if (!(c.T > 0.0) || !(c.t_end >= c.T)) throw std::invalid_argument(std::string(who) + ": need t_end >= T > 0");
  if (c.snapshot_stride < 1) throw std::invalid_argument(std::string(who) + ": snapshot_stride must be >= 1");
  if (c.grid.dim() != dim) {
    throw std::invalid_argument(std::string(who) + ": expects a " + std::to_string(dim) + "D grid");
  }
  if (!(c.initial.grid() == c.grid) || c.initial.components() != comps) {
    throw std::invalid_argument(std::string(who) + ": initial field does not match the grid");
  }
  c.steps();
}

// Shared time loop. `op` is the nonlinearity, `diagnose` fills everything
// except ode_mean, which is reconstructed from the forcing means afterwards.
template <class Diagnose>
Trajectory integrate(const SolverConfig& c, const std::string& kind, const NonlinearOperator& op,
                     Diagnose diagnose) {
  Trajectory traj;
  traj.kind = kind;
  traj.dt = c.dt;
  traj.nu = c.nu;
  traj.T = c.T;
  traj.snapshot_stride = c.snapshot_stride;

  const int steps = c.steps();
  const double t0 = c.initial.time();
  Field state = project(as_spectral(c.initial));
  // the projection keeps the mean; a non-solenoidal or unresolved initial
  // field is replaced by its admissible part
  state.set_time(t0);
  traj.snapshots.push_back(state);
  traj.diagnostics.push_back(diagnose(state, t0));
  std::vector<MeanVector> fmeans{traj.diagnostics.back().forcing_mean};

  for (int n = 0; n < steps; ++n) {
    const double t = t0 + n * c.dt;
    const double t_next = t0 + (n + 1) * c.dt;
    Field next = advance_with(state, t, c.dt, c.nu, c.scheme, op);
    next.set_time(t_next);
    const double energy = sobolev_norm_sq(next, 0);
    if (!next.all_finite() || !(energy <= c.blowup_threshold)) {
      std::ostringstream msg;
      msg << kind << " run blew up at t=" << t_next << " (step " << n + 1 << "): ‖v‖²=" << energy;
      throw BlowUpError(msg.str(), std::move(traj), t_next);
    }
    state = std::move(next);
    traj.diagnostics.push_back(diagnose(state, t_next));
    fmeans.push_back(traj.diagnostics.back().forcing_mean);
    if ((n + 1) % c.snapshot_stride == 0) traj.snapshots.push_back(state);
  }

  MeanVector m0 = traj.diagnostics.front().mean;
  const auto ode = mean_ode_integrate(fmeans, m0, {t0, t0 + steps * c.dt});
  for (std::size_t i = 0; i < ode.size(); ++i) traj.diagnostics[i].ode_mean = ode[i];
  return traj;
}

}  // namespace

std::string to_string(TimeScheme s) {
  return s == TimeScheme::imex_cn_heun ? "imex_cn_heun" : "integrating_factor";
}

TimeScheme time_scheme_from_string(const std::string& s) {
  if (s == "imex_cn_heun") return TimeScheme::imex_cn_heun;
  if (s == "integrating_factor") return TimeScheme::integrating_factor;
  throw std::invalid_argument("unknown time scheme '" + s + "' (imex_cn_heun | integrating_factor)");
}

int SolverConfig::steps() const {
  const double r = t_end / dt;
  const long long n = std::llround(r);
  if (n < 1 || std::abs(r - double(n)) > 1e-9 * std::max(1.0, r)) {
    throw std::invalid_argument("solver: t_end must be a positive integer multiple of dt");
  }
  return int(n);
}

std::string StepDiagnostics::csv_header() {
  return "t,l2_sq,grad_l2_sq,h1_sq,h2_sq,mean_1,mean_2,mean_3,ode_mean_1,ode_mean_2,ode_mean_3,"
         "forcing_mean_1,forcing_mean_2,forcing_mean_3,forcing_l2_sq,forcing_l65_sq,shear_l3_sq,w1_sigma,"
         "divergence";
}

std::string StepDiagnostics::csv_row() const {
  const double v[] = {t,
                      l2_sq,
                      grad_l2_sq,
                      h1_sq,
                      h2_sq,
                      mean.value[0],
                      mean.value[1],
                      mean.value[2],
                      ode_mean.value[0],
                      ode_mean.value[1],
                      ode_mean.value[2],
                      forcing_mean.value[0],
                      forcing_mean.value[1],
                      forcing_mean.value[2],
                      forcing_l2_sq,
                      forcing_l65_sq,
                      shear_l3_sq,
                      w1_sigma,
                      divergence};
  std::string row;
  char buf[40];
  for (std::size_t i = 0; i < std::size(v); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", v[i]);
    if (i) row += ',';
    row += buf;
  }
  return row;
}

double Trajectory::t_begin() const {
  if (snapshots.empty()) throw CoverageError("trajectory: no snapshots");
  return snapshots.front().time();
}

double Trajectory::t_end() const {
  if (snapshots.empty()) throw CoverageError("trajectory: no snapshots");
  return snapshots.back().time();
}

std::vector<MeanVector> Trajectory::means() const {
  std::vector<MeanVector> out;
  for (const auto& d : diagnostics) out.push_back(d.mean);
  return out;
}

Field Trajectory::state_at(double t) const {
  if (snapshots.empty()) throw CoverageError("trajectory: no snapshots");
  const double spacing = snapshots.size() > 1 ? snapshots[1].time() - snapshots[0].time() : 1.0;
  const double eps = 1e-9 * spacing;
  if (t < t_begin() - eps || t > t_end() + eps) {
    std::ostringstream msg;
    msg << "trajectory: t=" << t << " outside [" << t_begin() << ", " << t_end() << "]";
    throw CoverageError(msg.str());
  }
  auto it = std::lower_bound(snapshots.begin(), snapshots.end(), t - eps,
                             [](const Field& f, double v) { return f.time() < v; });
  if (it != snapshots.end() && std::abs(it->time() - t) <= eps) {
    Field f = *it;
    f.set_time(t);
    return f;
  }
  const std::size_t n = snapshots.size();
  const std::size_t right = std::size_t(it - snapshots.begin());
  const std::size_t width = std::min<std::size_t>(4, n);
  std::size_t first = right >= 2 ? right - 2 : 0;
  first = std::min(first, n - width);
  Field out(snapshots[first].grid(), snapshots[first].components(), Representation::spectral);
  for (std::size_t a = first; a < first + width; ++a) {
    double w = 1.0;
    for (std::size_t b = first; b < first + width; ++b) {
      if (b != a) w *= (t - snapshots[b].time()) / (snapshots[a].time() - snapshots[b].time());
    }
    out += w * as_spectral(snapshots[a]);
  }
  out.set_divergence_free(snapshots[first].divergence_free());
  out.set_time(t);
  return out;
}

Field nse_rhs(const Field& v, const Field& f, double nu) {
  require_same_grid(v, f, "nse_rhs");
  Field rhs = project(advection(v));
  rhs += project(as_spectral(f));
  rhs += nu * laplacian(v);
  return rhs;
}

Field advance_with(const Field& state, double t, double dt, double nu, TimeScheme scheme,
                   const NonlinearOperator& op) {
  const Field v = as_spectral(state);
  const auto& tab = v.grid().tables();
  const std::size_t ns = v.grid().spectral_size();
  const int comps = v.components();
  const Field n0 = op(v, t);

  Field pred(v.grid(), comps, Representation::spectral);
  if (scheme == TimeScheme::imex_cn_heun) {
    for (int c = 0; c < comps; ++c) {
      auto x = v.spectral(c);
      auto a = n0.spectral(c);
      auto o = pred.spectral(c);
      for (std::size_t i = 0; i < ns; ++i) {
        const double h = 0.5 * nu * tab.k_sq[i] * dt;
        o[i] = ((1.0 - h) * x[i] + dt * a[i]) / (1.0 + h);
      }
    }
  } else {
    for (int c = 0; c < comps; ++c) {
      auto x = v.spectral(c);
      auto a = n0.spectral(c);
      auto o = pred.spectral(c);
      for (std::size_t i = 0; i < ns; ++i) {
        const double e = std::exp(-nu * tab.k_sq[i] * dt);
        o[i] = e * (x[i] + dt * a[i]);
      }
    }
  }
  const Field n1 = op(pred, t + dt);

  Field out(v.grid(), comps, Representation::spectral);
  for (int c = 0; c < comps; ++c) {
    auto x = v.spectral(c);
    auto a = n0.spectral(c);
    auto b = n1.spectral(c);
    auto o = out.spectral(c);
    for (std::size_t i = 0; i < ns; ++i) {
      if (scheme == TimeScheme::imex_cn_heun) {
        const double h = 0.5 * nu * tab.k_sq[i] * dt;
        o[i] = ((1.0 - h) * x[i] + (0.5 * dt) * (a[i] + b[i])) / (1.0 + h);
      } else {
        const double e = std::exp(-nu * tab.k_sq[i] * dt);
        o[i] = e * x[i] + (0.5 * dt) * (e * a[i] + b[i]);
      }
    }
  }
  out.set_divergence_free(true);
  out.set_time(t + dt);
  return out;
}

Field advance(const Field& state, const std::function<Field(double)>& forcing, double nu, double dt, double t,
              TimeScheme scheme) {
  const NonlinearOperator op = [&](const Field& v, double s) {
    Field n = project(advection(v));
    n += project(as_spectral(forcing(s)));
    return n;
  };
  return advance_with(project(as_spectral(state)), t, dt, nu, scheme, op);
}

Trajectory run_2d_base(const SolverConfig& c) {
  validate(c, 2, 2, "run_2d_base");
  require_2d_form(c.forcing);
  const ForcingEvaluator eval(c.forcing, c.grid, 2);
  const ProjectedForcing forcing(eval);
  const ForcingStatsCache stats(eval, false);
  const NonlinearOperator op = [&](const Field& v, double t) {
    Field n = project(advection(v));
    n += forcing.at(t);
    return n;
  };
  return integrate(c, "base", op, [&](const Field& s, double t) {
    StepDiagnostics d;
    d.t = t;
    fill_state_norms(d, s);
    const ForcingStats fs = stats.at(t);
    d.forcing_mean = fs.mean;
    d.forcing_l2_sq = fs.l2_sq;
    d.forcing_l65_sq = kNaN;
    d.shear_l3_sq = shear_l3_sq(s);
    d.w1_sigma = w1_sigma_norm(s, c.sigma);
    return d;
  });
}

Trajectory run_perturbation(const SolverConfig& c, const Trajectory& base) {
  validate(c, 3, 3, "run_perturbation");
  if (base.snapshots.empty()) throw CoverageError("run_perturbation: empty base trajectory");
  const TorusGrid& bg = base.snapshots.front().grid();
  if (bg.length() != c.grid.length() || bg.points() != c.grid.points() || bg.dim() != 2) {
    throw std::invalid_argument("run_perturbation: base flow must live on the 2D grid with the same L and N");
  }
  const double t0 = c.initial.time();
  const double t1 = t0 + c.steps() * c.dt;
  const double eps = 1e-9 * c.dt;
  if (base.t_begin() > t0 + eps || base.t_end() < t1 - eps) {
    std::ostringstream msg;
    msg << "run_perturbation: base covers [" << base.t_begin() << ", " << base.t_end() << "], run needs [" << t0
        << ", " << t1 << "]";
    throw CoverageError(msg.str());
  }

  const ForcingEvaluator eval(c.forcing, c.grid, 3);
  const ProjectedForcing forcing(eval);
  const ForcingStatsCache stats(eval, true);
  const int d = 3;
  const NonlinearOperator op = [&](const Field& u, double t) {
    const Field up = to_physical(u);
    const Field vp = to_physical(lift_to_3d(base.state_at(t)));
    Field n = project(minus_div_symmetric(c.grid, d, [&](int i, int j, std::span<double> out) {
      auto ui = up.physical(i);
      auto uj = up.physical(j);
      auto vi = vp.physical(i);
      auto vj = vp.physical(j);
      // u_i (u_j + v_j) + v_i u_j, the symmetric part of u⊗u + u⊗v + v⊗u
      for (std::size_t k = 0; k < out.size(); ++k) out[k] = ui[k] * (uj[k] + vj[k]) + vi[k] * uj[k];
    }));
    n += forcing.at(t);
    return n;
  };
  return integrate(c, "perturbation", op, [&](const Field& s, double t) {
    StepDiagnostics diag;
    diag.t = t;
    fill_state_norms(diag, s);
    const ForcingStats fs = stats.at(t);
    diag.forcing_mean = fs.mean;
    diag.forcing_l2_sq = fs.l2_sq;
    diag.forcing_l65_sq = fs.l65_sq;
    diag.shear_l3_sq = shear_l3_sq(base.state_at(t));
    diag.w1_sigma = kNaN;
    return diag;
  });
}

Trajectory run_full_3d(const SolverConfig& c) {
  validate(c, 3, 3, "run_full_3d");
  const ForcingEvaluator eval(c.forcing, c.grid, 3);
  const ProjectedForcing forcing(eval);
  const ForcingStatsCache stats(eval, false);
  const NonlinearOperator op = [&](const Field& v, double t) {
    Field n = project(advection(v));
    n += forcing.at(t);
    return n;
  };
  return integrate(c, "direct", op, [&](const Field& s, double t) {
    StepDiagnostics d;
    d.t = t;
    fill_state_norms(d, s);
    const ForcingStats fs = stats.at(t);
    d.forcing_mean = fs.mean;
    d.forcing_l2_sq = fs.l2_sq;
    d.forcing_l65_sq = kNaN;
    d.shear_l3_sq = kNaN;
    d.w1_sigma = kNaN;
    return d;
  });
}

std::vector<MeanVector> mean_ode_integrate(std::span<const MeanVector> forcing_means, const MeanVector& initial,
                                           TimeInterval interval) {
  if (!(interval.t1 >= interval.t0)) throw std::invalid_argument("mean_ode_integrate: reversed interval");
  const double eps = 1e-9 * std::max({1.0, std::abs(interval.t0), std::abs(interval.t1)});
  std::vector<const MeanVector*> in;
  for (const auto& m : forcing_means)
    if (m.time >= interval.t0 - eps && m.time <= interval.t1 + eps) in.push_back(&m);
  if (in.empty() || std::abs(in.front()->time - interval.t0) > eps || std::abs(in.back()->time - interval.t1) > eps) {
    throw CoverageError("mean_ode_integrate: forcing samples do not cover the interval");
  }
  std::vector<MeanVector> out;
  MeanVector m = initial;
  m.time = in.front()->time;
  out.push_back(m);
  for (std::size_t i = 1; i < in.size(); ++i) {
    const double h = in[i]->time - in[i - 1]->time;
    if (!(h > 0.0)) throw std::invalid_argument("mean_ode_integrate: forcing times must increase");
    for (int c = 0; c < 3; ++c) m.value[c] = m.value[c] + (0.5 * h) * (in[i - 1]->value[c] + in[i]->value[c]);
    m.time = in[i]->time;
    out.push_back(m);
  }
  return out;
}

Field recover_pressure(const Field& v, const Field& f, double /*nu*/) {
  require_same_grid(v, f, "recover_pressure");
  // advection() returns −∇·(v⊗v) = −v·∇v for solenoidal v
  const Field minus_g = dealias(advection(v));
  const Field fh = as_spectral(f);
  const auto& g = v.grid();
  const auto& t = g.tables();
  Field p(g, 1, Representation::spectral);
  auto o = p.spectral(0);
  for (std::size_t i = 0; i < g.spectral_size(); ++i) {
    if (t.kd_sq[i] == 0.0) continue;
    Complex acc{};
    for (int a = 0; a < g.dim(); ++a) acc += Complex(0.0, t.kd[i][a]) * (-minus_g.spectral(a)[i] - fh.spectral(a)[i]);
    o[i] = acc / t.kd_sq[i];
  }
  p.set_time(v.time());
  return p;
}

Field taylor_green_exact(const TorusGrid& grid, double nu, double t) {
  if (std::abs(grid.length() - 2.0 * std::numbers::pi) > 1e-12) {
    throw std::invalid_argument("taylor_green_exact: needs L = 2π");
  }
  const double a = std::exp(-2.0 * nu * t);
  Field f = to_spectral(sample(grid, grid.dim(), [a](double x1, double x2, double) {
    return std::array<double, 3>{a * std::sin(x1) * std::cos(x2), -a * std::cos(x1) * std::sin(x2), 0.0};
  }));
  f.set_divergence_free(true);
  f.set_time(t);
  return f;
}

}  // namespace nsstab
