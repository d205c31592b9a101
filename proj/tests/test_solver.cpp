#include <catch_amalgamated.hpp>

#include "nsstab/norms.hpp"
#include "nsstab/solver.hpp"
#include "nsstab/spectral.hpp"
#include "support.hpp"

using namespace nsstab;
using Catch::Approx;
using testing::pi;

namespace {

using Vec = std::array<double, 3>;

Field zero_field(const TorusGrid& g, int comps) { return Field(g, comps, Representation::spectral); }

ForcingSpec forcing_of(std::vector<std::string> comps) {
  std::vector<Expression> e;
  for (const auto& c : comps) e.push_back(Expression::parse(c));
  return ForcingSpec::analytic(std::move(e));
}

SolverConfig config(const TorusGrid& g, Field initial, double nu, double dt, double t_end) {
  SolverConfig c;
  c.grid = g;
  c.initial = std::move(initial);
  c.nu = nu;
  c.dt = dt;
  c.t_end = t_end;
  c.T = t_end;
  return c;
}

double max_abs(const Field& f) {
  const Field p = to_physical(f);
  double m = 0.0;
  for (double v : p.physical_data()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST_CASE("right-hand side", "[solver]") {
  const auto g = make_grid(2 * pi, 16, 3);
  const double nu = 0.3;
  SECTION("Taylor-Green nonlinearity is a pure gradient") {
    const Field v = testing::taylor_green(g);
    Field expected = v;
    expected *= -2 * nu;
    CHECK(max_abs_difference(nse_rhs(v, zero_field(g, 3), nu), expected) < 1e-13);
  }
  SECTION("shear mode") {
    const Field v = testing::field_of(g, 3, [](double x, double, double) { return Vec{0, 0, std::sin(x)}; });
    Field expected = v;
    expected *= -nu;
    CHECK(max_abs_difference(nse_rhs(v, zero_field(g, 3), nu), expected) < 1e-14);
  }
  SECTION("forcing passes through at rest") {
    const Field f = random_divfree_field(g, 2, 1.0);
    CHECK(max_abs_difference(nse_rhs(zero_field(g, 3), f, nu), f) < 1e-13);
  }
  SECTION("grid mismatch") {
    CHECK_THROWS_AS(nse_rhs(testing::taylor_green(g), zero_field(make_grid(2 * pi, 8, 3), 3), nu),
                    std::invalid_argument);
  }
}

TEST_CASE("single steps", "[solver]") {
  const auto g = make_grid(2 * pi, 16, 3);
  const double nu = 0.5, dt = 0.01;
  const auto no_force = [&](double) { return zero_field(g, 3); };
  const Field mode = testing::field_of(g, 3, [](double x, double, double) { return Vec{0, 0, std::sin(x)}; });
  for (TimeScheme s : {TimeScheme::imex_cn_heun, TimeScheme::integrating_factor}) {
    INFO(to_string(s));
    Field expected = mode;
    expected *= std::exp(-nu * dt);
    const Field next = advance(mode, no_force, nu, dt, 0.0, s);
    CHECK(max_abs_difference(next, expected) < 1e-7);
    CHECK(relative_divergence(next) < 1e-10);
    CHECK(max_abs(advance(zero_field(g, 3), no_force, nu, dt, 0.0, s)) == 0.0);
  }
  // the integrating factor is exact for a linear mode
  Field exact = mode;
  exact *= std::exp(-nu * dt);
  CHECK(max_abs_difference(advance(mode, no_force, nu, dt, 0.0, TimeScheme::integrating_factor), exact) < 1e-14);
  CHECK(time_scheme_from_string("integrating_factor") == TimeScheme::integrating_factor);
  CHECK(time_scheme_from_string(to_string(TimeScheme::imex_cn_heun)) == TimeScheme::imex_cn_heun);
  CHECK_THROWS_AS(time_scheme_from_string("euler"), std::invalid_argument);
}

TEST_CASE("two-dimensional base runs", "[solver]") {
  const auto g = make_grid(2 * pi, 16, 2);
  SECTION("Taylor-Green energy decays at rate 4ν") {
    const double nu = 0.1;
    const Trajectory tr = run_2d_base(config(g, testing::taylor_green(g), nu, 0.01, 1.0));
    const double e0 = tr.diagnostics.front().l2_sq;
    CHECK(e0 == Approx(std::pow(2 * pi, 3) / 2).epsilon(1e-13));
    for (const auto& d : tr.diagnostics) CHECK(d.l2_sq == Approx(e0 * std::exp(-4 * nu * d.t)).epsilon(1e-6));
    for (const auto& s : tr.snapshots) CHECK(relative_divergence(s) <= 1e-10);
    CHECK(tr.snapshots.back().components() == 2);
  }
  SECTION("second order under dt halving") {
    const double nu = 0.1;
    double err[2];
    for (int i = 0; i < 2; ++i) {
      const double dt = 0.02 / (1 << i);
      const Trajectory tr = run_2d_base(config(g, testing::taylor_green(g), nu, dt, 1.0));
      err[i] = max_abs_difference(tr.snapshots.back(), taylor_green_exact(g, nu, 1.0));
    }
    CHECK(err[0] / err[1] >= 3.5);
  }
  SECTION("zero data stay zero") {
    const Trajectory tr = run_2d_base(config(g, zero_field(g, 2), 0.1, 0.01, 0.5));
    for (const auto& s : tr.snapshots) CHECK(max_abs(s) == 0.0);
  }
  SECTION("one-mode forcing reaches its steady state") {
    const auto g8 = make_grid(2 * pi, 8, 2);
    auto c = config(g8, zero_field(g8, 2), 1.0, 0.02, 14.0);
    c.forcing = forcing_of({"sin(x2)", "0"});
    const Trajectory tr = run_2d_base(c);
    const Field steady = testing::field_of(g8, 2, [](double, double y, double) { return Vec{std::sin(y), 0, 0}; });
    CHECK(max_abs_difference(tr.snapshots.back(), steady) < 1e-5);
  }
  SECTION("forcing outside the 2D form is rejected") {
    auto c = config(g, zero_field(g, 2), 0.1, 0.01, 0.1);
    c.forcing = forcing_of({"sin(x3)", "0"});
    CHECK_THROWS_AS(run_2d_base(c), std::invalid_argument);
  }
  SECTION("configuration errors") {
    CHECK_THROWS_AS(run_2d_base(config(g, zero_field(g, 2), 0.0, 0.01, 0.1)), std::invalid_argument);
    CHECK_THROWS_AS(run_2d_base(config(g, zero_field(g, 2), 0.1, 0.03, 0.1)), std::invalid_argument);
    const auto g3 = make_grid(2 * pi, 16, 3);
    CHECK_THROWS_AS(run_2d_base(config(g3, zero_field(g3, 3), 0.1, 0.01, 0.1)), std::invalid_argument);
  }
}

TEST_CASE("mean ODE", "[solver]") {
  std::vector<MeanVector> f;
  for (int i = 0; i <= 100; ++i) {
    MeanVector m;
    m.time = 0.01 * i;
    m.value = {0.5, 0.0, std::cos(m.time)};
    f.push_back(m);
  }
  MeanVector m0;
  m0.value = {1.0, -2.0, 0.25};
  const auto out = mean_ode_integrate(f, m0, {0.0, 1.0});
  REQUIRE(out.size() == f.size());
  for (const auto& m : out) {
    CHECK(m.value[0] == Approx(1.0 + 0.5 * m.time).epsilon(1e-14));
    CHECK(m.value[1] == -2.0);
    CHECK(std::abs(m.value[2] - (0.25 + std::sin(m.time))) < 1e-5);
  }
  const auto part = mean_ode_integrate(f, m0, {0.5, 0.8});
  CHECK(part.size() == 31);
  CHECK(part.front().value == m0.value);
  CHECK_THROWS_AS(mean_ode_integrate(f, m0, {0.0, 1.5}), CoverageError);
  CHECK_THROWS_AS(mean_ode_integrate(f, m0, {0.5, 0.2}), std::invalid_argument);
}

TEST_CASE("mean evolution inside runs", "[solver]") {
  const auto g = make_grid(2 * pi, 8, 3);
  auto c = config(g, random_divfree_field(g, 1, 1.0), 0.2, 0.01, 1.0);
  c.initial = c.initial + testing::field_of(g, 3, [](double, double, double) { return Vec{0.1, 0.0, -0.2}; });
  c.forcing = forcing_of({"0.3", "sin(t)", "0"});
  const Trajectory tr = run_full_3d(c);
  for (const auto& d : tr.diagnostics) {
    CHECK(std::abs(d.mean.value[0] - (0.1 + 0.3 * d.t)) < 1e-12);
    CHECK(std::abs(d.mean.value[1] - (1 - std::cos(d.t))) < 1e-5);
    CHECK(std::abs(d.mean.value[2] + 0.2) < 1e-14);
    for (int k = 0; k < 3; ++k) CHECK(std::abs(d.mean.value[k] - d.ode_mean.value[k]) < 1e-12);
  }
}

TEST_CASE("perturbation runs", "[solver]") {
  const auto g2 = make_grid(2 * pi, 16, 2);
  const auto g3 = make_grid(2 * pi, 16, 3);
  const double nu = 0.2, dt = 0.01, t_end = 0.5;
  const Trajectory tg = run_2d_base(config(g2, testing::taylor_green(g2, 0.5), nu, dt, t_end));

  SECTION("zero data give the zero perturbation") {
    const Trajectory p = run_perturbation(config(g3, zero_field(g3, 3), nu, dt, t_end), tg);
    for (const auto& s : p.snapshots) CHECK(max_abs(s) == 0.0);
  }
  SECTION("without base flow it is the full system") {
    const Trajectory still = run_2d_base(config(g2, zero_field(g2, 2), nu, dt, t_end));
    const Field u0 = random_divfree_field(g3, 4, 1.5);
    const Trajectory p = run_perturbation(config(g3, u0, nu, dt, t_end), still);
    const Trajectory d = run_full_3d(config(g3, u0, nu, dt, t_end));
    REQUIRE(p.snapshots.size() == d.snapshots.size());
    CHECK(max_abs_difference(p.snapshots.back(), d.snapshots.back()) < 1e-12);
  }
  SECTION("small single mode decays on a Taylor-Green base") {
    const Field u0 = testing::field_of(g3, 3, [](double x, double, double) { return Vec{0, 0, 0.01 * std::sin(x)}; });
    const Trajectory p = run_perturbation(config(g3, u0, nu, dt, t_end), tg);
    CHECK(p.diagnostics.back().l2_sq < p.diagnostics.front().l2_sq);
  }
  SECTION("split and direct runs agree") {
    const Field u0 = random_divfree_field(g3, 9, 2.0);
    auto pc = config(g3, u0, nu, dt, t_end);
    pc.forcing = forcing_of({"0", "0.1*sin(x1+x3)", "0"});
    const Trajectory p = run_perturbation(pc, tg);
    auto dc = config(g3, lift_to_3d(testing::taylor_green(g2, 0.5)) + u0, nu, dt, t_end);
    dc.forcing = pc.forcing;
    const Trajectory d = run_full_3d(dc);
    const Field split = lift_to_3d(tg.snapshots.back()) + p.snapshots.back();
    CHECK(std::sqrt(sobolev_norm_sq(d.snapshots.back() - split, 0)) < 1e-5);
  }
  SECTION("base must cover the run") {
    CHECK_THROWS_AS(run_perturbation(config(g3, zero_field(g3, 3), nu, dt, 1.0), tg), CoverageError);
  }
}

TEST_CASE("x3-invariant data stay x3-invariant", "[solver]") {
  const auto g2 = make_grid(2 * pi, 16, 2);
  const auto g3 = make_grid(2 * pi, 16, 3);
  const Field v0 = lift_to_3d(random_divfree_field(g2, 6, 1.0));
  const Trajectory d = run_full_3d(config(g3, v0, 0.05, 0.01, 0.5));
  for (const auto& s : d.snapshots) {
    CHECK(lp_norm(spectral_derivative(s, 2, 1), 2.0) <= 1e-10);
    Field third(g3, 1, Representation::spectral);
    std::copy(s.spectral(2).begin(), s.spectral(2).end(), third.spectral(0).begin());
    CHECK(lp_norm(third, 2.0) <= 1e-10);
  }
  CHECK_NOTHROW(restrict_to_2d(d.snapshots.back(), 1e-10));
  const Trajectory z = run_full_3d(config(g3, zero_field(g3, 3), 0.05, 0.01, 0.1));
  CHECK(max_abs(z.snapshots.back()) == 0.0);
}

TEST_CASE("pressure recovery", "[solver]") {
  const auto g = make_grid(2 * pi, 16, 3);
  SECTION("Taylor-Green") {
    const Field p = recover_pressure(testing::taylor_green(g), zero_field(g, 3), 0.1);
    // with v·∇v = −∇p for the steady-shape vortex, p = (cos 2x1 + cos 2x2)/4
    const Field expected =
        testing::scalar_of(g, [](double x, double y, double) { return (std::cos(2 * x) + std::cos(2 * y)) / 4; });
    CHECK(max_abs_difference(p, expected) < 1e-13);
  }
  SECTION("no nonlinearity and no forcing") {
    const Field v = testing::field_of(g, 3, [](double x, double, double) { return Vec{0, 0, std::sin(x)}; });
    CHECK(max_abs(recover_pressure(v, zero_field(g, 3), 0.1)) < 1e-15);
  }
  SECTION("gradient forcing at rest") {
    const Field phi = testing::scalar_of(g, [](double x, double y, double z) { return std::sin(x) * std::cos(2 * y + z); });
    const Field f = gradient(phi);
    const Field p = recover_pressure(zero_field(g, 3), f, 0.1);
    CHECK(max_abs_difference(gradient(p), f) < 1e-12);
  }
  SECTION("completes the projected momentum balance") {
    const Field v = random_divfree_field(g, 21, 2.0);
    const Field f = to_spectral(sample(g, 3, [](double x, double y, double z) {
      return Vec{std::cos(y), std::sin(x + z), std::cos(x) * std::sin(y)};
    }));
    const double nu = 0.1;
    // rhs − (νΔv + f − v·∇v) must equal −∇p
    Field lhs = nse_rhs(v, f, nu);
    Field raw = laplacian(v);
    raw *= nu;
    raw += f;
    Field adv(g, 3, Representation::spectral);
    {
      const Field vp = to_physical(v);
      Field a(g, 3, Representation::physical);
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          const Field dj = to_physical(spectral_derivative(v, j, 1));
          auto out = a.physical(i);
          auto vj = vp.physical(j);
          auto dvi = dj.physical(i);
          for (std::size_t k = 0; k < out.size(); ++k) out[k] += vj[k] * dvi[k];
        }
      }
      adv = dealias(to_spectral(a));
    }
    raw -= adv;
    Field grad_p = gradient(recover_pressure(v, f, nu));
    const Field diff = lhs - raw;
    grad_p *= -1.0;
    CHECK(max_abs_difference(diff, grad_p) < 1e-10);
  }
}

TEST_CASE("analytic Taylor-Green", "[solver]") {
  const auto g = make_grid(2 * pi, 16, 2);
  CHECK(max_abs_difference(taylor_green_exact(g, 0.1, 0.0), testing::taylor_green(g)) < 1e-15);
  CHECK(max_abs(taylor_green_exact(g, 0.1, 500.0)) < 1e-40);
  const double e0 = sobolev_norm_sq(taylor_green_exact(g, 0.1, 0.0), 0);
  CHECK(sobolev_norm_sq(taylor_green_exact(g, 0.1, 2.0), 0) == Approx(e0 * std::exp(-0.8)).epsilon(1e-13));
  CHECK_THROWS_AS(taylor_green_exact(make_grid(1.0, 16, 2), 0.1, 0.0), std::invalid_argument);
}

TEST_CASE("blow-up aborts with the partial trajectory", "[solver]") {
  const auto g = make_grid(2 * pi, 8, 3);
  auto c = config(g, random_divfree_field(g, 3, 1.0), 0.01, 0.01, 1.0);
  c.forcing = forcing_of({"0", "0", "1e3*sin(x1)"});
  c.blowup_threshold = 2 * sobolev_norm_sq(c.initial, 0);
  try {
    run_full_3d(c);
    FAIL("expected a blow-up");
  } catch (const BlowUpError& e) {
    CHECK(e.time() > 0.0);
    CHECK_FALSE(e.partial().diagnostics.empty());
    CHECK(e.partial().diagnostics.back().t < e.time());
    CHECK(std::string(e.what()).find("blew up") != std::string::npos);
  }
}

TEST_CASE("trajectory interpolation", "[solver]") {
  const auto g = make_grid(2 * pi, 8, 2);
  const double nu = 0.5;
  Trajectory tr;
  for (int i = 0; i <= 10; ++i) tr.snapshots.push_back(taylor_green_exact(g, nu, 0.1 * i));
  CHECK(max_abs_difference(tr.state_at(0.3), tr.snapshots[3]) == 0.0);
  CHECK(max_abs_difference(tr.state_at(0.35), taylor_green_exact(g, nu, 0.35)) < 1e-5);
  CHECK(max_abs_difference(tr.state_at(0.01), taylor_green_exact(g, nu, 0.01)) < 1e-5);
  CHECK(max_abs_difference(tr.state_at(0.99), taylor_green_exact(g, nu, 0.99)) < 1e-5);
  CHECK_THROWS_AS(tr.state_at(1.2), CoverageError);
  CHECK_THROWS_AS(tr.state_at(-0.1), CoverageError);
  CHECK(tr.t_begin() == 0.0);
  CHECK(tr.t_end() == Approx(1.0));
  CHECK_THROWS_AS(Trajectory{}.state_at(0.0), CoverageError);
}

TEST_CASE("snapshot stride and diagnostics CSV", "[solver]") {
  const auto g = make_grid(2 * pi, 8, 2);
  auto c = config(g, testing::taylor_green(g), 0.1, 0.01, 0.2);
  c.snapshot_stride = 5;
  const Trajectory tr = run_2d_base(c);
  CHECK(tr.snapshots.size() == 5);
  CHECK(tr.diagnostics.size() == 21);
  CHECK(tr.snapshots[2].time() == Approx(0.1));
  const std::string header = StepDiagnostics::csv_header();
  const std::string row = tr.diagnostics[3].csv_row();
  CHECK(std::count(header.begin(), header.end(), ',') == std::count(row.begin(), row.end(), ','));
}
