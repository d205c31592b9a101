#include <catch_amalgamated.hpp>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nsstab/config.hpp"
#include "nsstab/experiment.hpp"
#include "nsstab/report_io.hpp"
#include "nsstab/trajectory_io.hpp"

using namespace nsstab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("nsstab_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(NSSTAB_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const char* kMinimal = R"yaml(grid:
  N: 8
nu: 0.1
dt: 0.05
)yaml";

const char* kSmallTaylorGreen = R"yaml(scenario: tiny-tg
seed: 3
grid:
  N: 8
nu: 0.1
dt: 0.05
T: 0.5
windows: 2
snapshot_stride: 5
checks:
  dt_halving: false
base:
  initial:
    components: ["sin(x1)*cos(x2)", "-cos(x1)*sin(x2)"]
)yaml";

}  // namespace

TEST_CASE("minimal config gets defaults", "[config]") {
  const ExperimentSpec s = parse_config(kMinimal);
  CHECK(s.N == 8);
  CHECK(s.nu == 0.1);
  CHECK(s.dt == 0.05);
  CHECK(s.L == Catch::Approx(6.283185307179586));
  CHECK(s.T == 1.0);
  CHECK(s.windows == 1);
  CHECK(s.scheme == TimeScheme::imex_cn_heun);
  CHECK(s.sigma == 4.0);
  CHECK_FALSE(s.perturbation.enabled);
  CHECK_FALSE(s.direct.enabled);
  CHECK(s.budget.gamma_fraction == 0.5);
  CHECK(s.checks.dt_halving);
  const std::string echoed = emit_config(s);
  CHECK(echoed.find("sigma: 4") != std::string::npos);
  CHECK(echoed.find("windows: 1") != std::string::npos);
}

TEST_CASE("config round trip", "[config]") {
  std::vector<std::string> texts{kMinimal, kSmallTaylorGreen};
  for (const auto& e : fs::directory_iterator(NSSTAB_SCENARIOS)) texts.push_back(slurp(e.path()));
  texts.push_back(R"yaml(scenario: rich
grid: {L: 3.5, N: 16}
nu: 0.7
dt: 0.02
T: 2
windows: 3
scheme: integrating_factor
constants: {a: 0.25}
base:
  initial: {kind: random, seed: 9, decay: 1.5, h1_sq: 0.01}
  forcing: {components: ["a*sin(2*pi*x2/L)", "0"]}
perturbation:
  initial: {kind: random, h1_sq: 1e-4, mean: [0.1, 0, 0]}
  forcing: {components: ["0", "0", "0.001*cos(t)"]}
direct: {}
budget: {c3: 0.02, gamma_fraction: 0.25, theta: 0.4}
checks: {w1sigma_relative_tolerance: 0.1}
sweep: {gamma_fraction: [0.1, 0.2], T: [1, 2]}
)yaml");
  for (const auto& t : texts) {
    const ExperimentSpec a = parse_config(t);
    const ExperimentSpec b = parse_config(emit_config(a));
    CHECK(a == b);
    CHECK(emit_config(a) == emit_config(b));
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 16);
  }
}

TEST_CASE("config errors", "[config]") {
  SECTION("unknown key names its line") {
    try {
      parse_config("grid:\n  N: 8\nnu: 0.1\ndt: 0.05\nwindow: 3\n");
      FAIL("accepted an unknown key");
    } catch (const ConfigError& e) {
      const std::string m = e.what();
      CHECK(m.find("line 5") != std::string::npos);
      CHECK(m.find("window") != std::string::npos);
    }
  }
  SECTION("γ above γ* is refused with the condition cited") {
    const std::string text = std::string(kMinimal) +
                             "budget: {c1: 0.5, c3: 0.02, c4: 0.3, c5: 30, c_star: 0.1, gamma_star: 0.001, gamma: 0.002}\n";
    try {
      parse_config(text);
      FAIL("accepted γ > γ*");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("4.19") != std::string::npos);
    }
  }
  SECTION("c* too large") {
    CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "budget: {c4: 0.3, c_star: 0.05}\n"), ConfigError);
  }
  SECTION("other schema violations") {
    CHECK_THROWS_AS(parse_config("nu: 0.1\ndt: 0.05\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("grid:\n  N: 7\nnu: 0.1\ndt: 0.05\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "scheme: euler\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "base:\n  forcing:\n    components: [\"sin(\", \"0\"]\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(std::string(kMinimal) + "base:\n  forcing:\n    components: [\"sin(x3)\", \"0\"]\n"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config("grid: [1, 2\n"), ConfigError);
  }
}

TEST_CASE("budget resolution", "[experiment]") {
  ExperimentSpec s = parse_config(std::string(kSmallTaylorGreen) +
                                  "perturbation:\n  initial:\n    components: [\"0\", \"0\", \"0.01*sin(x1)\"]\n"
                                  "budget: {c3: 0.02}\n");
  const ResolvedBudget b = resolve_budget(s);
  CHECK(b.c_s1 == Catch::Approx(0.5));
  CHECK_FALSE(b.calibration);
  const auto& st = b.stability;
  CHECK(st.c1 == Catch::Approx(0.5));
  CHECK(st.c3 == 0.02);
  CHECK(st.c_star == Catch::Approx(0.5 * s.nu * st.c4));
  CHECK(st.gamma == Catch::Approx(0.5 * st.gamma_star));
  CHECK(eq419_margin(st.nu, st.c4, st.c5, st.gamma_star, st.c_star) >= -1e-15);
  const double x = st.c_star * s.T / 4;
  CHECK(st.alpha == Catch::Approx(0.9 * std::exp(-x) * (1 - std::exp(-x))));
  CHECK(eq427_lhs(st.alpha, st.c_star, s.T) <= 1.0);
}

TEST_CASE("report emission and exit codes", "[experiment]") {
  const fs::path dir = scratch("report");
  std::string text;
  CHECK(emit_report(dir / "missing", text) == 2);
  CHECK(emit_report(dir, text) == 2);

  ReportSet set;
  set.add(make_report("3.1", "a", {0.0}, {1.0}));
  auto v = make_report("4.13", "b", {0.0}, {-1.0});
  v.status = Status::vacuous;
  set.add(v);
  std::ofstream(dir / "inequalities.json") << inequalities_json(set);
  CHECK(emit_report(dir, text) == 0);
  CHECK(text.rfind("OK", 0) == 0);

  set.add(make_report("3.3", "c", {0.5}, {-0.25}));
  std::ofstream(dir / "inequalities.json") << inequalities_json(set);
  CHECK(emit_report(dir, text) == 1);
  CHECK(text.rfind("FAIL 3.3", 0) == 0);

  const ReportSet back = parse_inequalities_json(inequalities_json(set));
  REQUIRE(back.reports.size() == 3);
  CHECK(back.find("4.13")->status == Status::vacuous);
  CHECK(back.find("3.3")->margins == std::vector<double>{-0.25});
  fs::remove_all(dir);
}

TEST_CASE("experiment artifacts and determinism", "[experiment]") {
  const ExperimentSpec s = parse_config(kSmallTaylorGreen);
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  const RunArtifacts ra = run_experiment(s, a);
  const RunArtifacts rb = run_experiment(s, b);
  CHECK(ra.exit_code == 0);
  for (const auto& p : {ra.inequalities, ra.windows_csv, ra.summary, ra.run_json}) CHECK(fs::exists(p));
  CHECK(fs::exists(a / "base" / "diagnostics.csv"));
  CHECK(slurp(a / "base" / "diagnostics.csv") == slurp(b / "base" / "diagnostics.csv"));
  CHECK(slurp(a / "inequalities.json") == slurp(b / "inequalities.json"));
  CHECK(ra.config_hash == config_hash(s));
  CHECK(ra.reports.find("3.3")->status == Status::pass);

  // re-analysis from disk reproduces the stored reports
  const std::string before = slurp(a / "inequalities.json");
  const RunArtifacts rv = verify_experiment(a);
  CHECK(rv.exit_code == 0);
  CHECK(slurp(a / "inequalities.json") == before);

  TrajectoryMeta meta;
  const Trajectory t = read_trajectory(a / "base", &meta);
  CHECK(t.diagnostics.size() == 21);
  CHECK(parse_config(meta.config_text) == s);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("sweep members", "[experiment]") {
  ExperimentSpec s = parse_config(std::string(kSmallTaylorGreen) + "sweep: {T: [0.5, 1], forcing_scale: [1, 2, 3]}\n");
  const auto m = sweep_members(s);
  REQUIRE(m.size() == 6);
  CHECK(m[0].spec.T == 0.5);
  CHECK(m[5].spec.T == 1.0);
  CHECK(m[5].forcing_scale == 3.0);
  CHECK(m[0].name != m[1].name);
}

TEST_CASE("command line exit codes", "[cli]") {
  const fs::path dir = scratch("cli");
  std::ofstream(dir / "tg.yaml") << kSmallTaylorGreen;
  std::ofstream(dir / "bad.yaml") << "grid:\n  N: 8\nnu: 0.1\ndt: 0.05\nbogus: 1\n";
  const std::string out = (dir / "out").string();
  CHECK(run_cli("run --config " + (dir / "tg.yaml").string() + " --out " + out) == 0);
  CHECK(run_cli("verify --out " + out) == 0);
  CHECK(run_cli("report --out " + out) == 0);
  CHECK(run_cli("report --out " + (dir / "nothing").string()) == 2);
  CHECK(run_cli("run --config " + (dir / "bad.yaml").string() + " --out " + out) == 4);
  CHECK(run_cli("run --config " + (dir / "absent.yaml").string()) != 0);

  // a failed report turns into exit 1 with the id first
  ReportSet set = parse_inequalities_json(slurp(dir / "out" / "inequalities.json"));
  set.add(make_report("3.2", "forced failure", {1.0}, {-1.0}));
  std::ofstream(dir / "out" / "inequalities.json") << inequalities_json(set);
  CHECK(run_cli("report --out " + out) == 1);
  fs::remove_all(dir);
}

TEST_CASE("blow-up leaves partial artifacts", "[cli]") {
  const fs::path dir = scratch("blowup");
  std::ofstream(dir / "boom.yaml") << R"yaml(scenario: boom
grid:
  N: 8
nu: 0.01
dt: 0.05
T: 1
blowup_threshold: 1e-3
checks: {dt_halving: false}
base:
  initial:
    components: ["sin(x1)*cos(x2)", "-cos(x1)*sin(x2)"]
)yaml";
  CHECK(run_cli("run --config " + (dir / "boom.yaml").string() + " --out " + (dir / "out").string()) == 3);
  const std::string run = slurp(dir / "out" / "run.json");
  CHECK(run.find("aborted") != std::string::npos);
  fs::remove_all(dir);
}
