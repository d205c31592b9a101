// Command-line front end: run, verify, report, calibrate, sweep.
#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "nsstab/calibration.hpp"
#include "nsstab/config.hpp"
#include "nsstab/experiment.hpp"
#include "nsstab/grid.hpp"

namespace fs = std::filesystem;
using namespace nsstab;

namespace {

constexpr int kExitAborted = 3;
constexpr int kExitConfig = 4;

ExperimentSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path);
  std::ostringstream s;
  s << in.rdbuf();
  try {
    return parse_config(s.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

fs::path output_dir(const ExperimentSpec& spec, const std::string& flag) {
  if (!flag.empty()) return flag;
  if (!spec.output.empty()) return spec.output;
  return fs::path("out") / spec.scenario;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-spectral Navier-Stokes runs with executable energy and stability estimates"};
  app.require_subcommand(1);

  std::string config, out;
  long long seed = -1;
  int parallel = 1;
  bool dt_halving = false;

  auto* run = app.add_subcommand("run", "simulate a scenario and check every estimate");
  run->add_option("--config", config, "scenario YAML")->required();
  run->add_option("--seed", seed, "override the scenario seed")->check(CLI::NonNegativeNumber);
  run->add_option("--out", out, "artifact directory (default: output key or out/<scenario>)");
  run->add_flag("--dt-halving", dt_halving, "convergence study at dt, dt/2, dt/4");

  auto* verify = app.add_subcommand("verify", "re-check stored trajectories");
  verify->add_option("--out", out, "artifact directory")->required();

  auto* report = app.add_subcommand("report", "print the summary of stored reports");
  report->add_option("--out", out, "artifact directory")->required();

  auto* calibrate = app.add_subcommand("calibrate", "ensemble estimate of the embedding constants");
  calibrate->add_option("--config", config, "scenario YAML (grid and budget sections)")->required();
  calibrate->add_option("--seed", seed, "override the scenario seed")->check(CLI::NonNegativeNumber);
  calibrate->add_option("--out", out, "directory for calibration.json");

  auto* sweep = app.add_subcommand("sweep", "run the sweep axes of a scenario");
  sweep->add_option("--config", config, "scenario YAML with a sweep section")->required();
  sweep->add_option("--seed", seed, "override the scenario seed")->check(CLI::NonNegativeNumber);
  sweep->add_option("--out", out, "root directory of the members");
  sweep->add_option("--parallel", parallel, "members run at once")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      ExperimentSpec spec = load_spec(config);
      if (seed >= 0) spec.seed = std::uint64_t(seed);
      const fs::path dir = output_dir(spec, out);
      RunOptions options;
      options.dt_halving_study = dt_halving;
      const RunArtifacts art = run_experiment(spec, dir, options);
      std::string text;
      emit_report(dir, text);
      std::cout << text << "artifacts: " << dir.string() << " (config " << art.config_hash << ", "
                << art.wall_seconds << " s)\n";
      return art.exit_code;
    }
    if (*verify) {
      const RunArtifacts art = verify_experiment(out);
      std::string text;
      emit_report(out, text);
      std::cout << text;
      return art.exit_code;
    }
    if (*report) {
      std::string text;
      const int code = emit_report(out, text);
      (code == 2 ? std::cerr : std::cout) << text;
      return code;
    }
    if (*calibrate) {
      ExperimentSpec spec = load_spec(config);
      if (seed >= 0) spec.seed = std::uint64_t(seed);
      const CalibratedConstants c =
          calibrate_constants(make_grid(spec.L, spec.N, 3), spec.budget.ensemble, spec.seed, spec.budget.theta);
      std::printf("c1 %.17g\nc3 %.17g\nc4 %.17g\nc5 %.17g\nensemble %d seed %llu theta %g\n", c.c1, c.c3, c.c4, c.c5,
                  c.ensemble, static_cast<unsigned long long>(c.seed), c.theta);
      if (!out.empty()) {
        fs::create_directories(out);
        nlohmann::ordered_json j;
        j["L"] = spec.L;
        j["N"] = spec.N;
        j["ensemble"] = c.ensemble;
        j["seed"] = c.seed;
        j["theta"] = c.theta;
        j["c1"] = c.c1;
        j["c3"] = c.c3;
        j["c4"] = c.c4;
        j["c5"] = c.c5;
        j["c3_history"] = c.c3_history;
        std::ofstream(fs::path(out) / "calibration.json") << j.dump(2) << "\n";
      }
      return 0;
    }
    if (*sweep) {
      ExperimentSpec spec = load_spec(config);
      if (seed >= 0) spec.seed = std::uint64_t(seed);
      const fs::path dir = output_dir(spec, out);
      const auto results = run_sweep(spec, dir, parallel);
      int code = 0;
      for (const auto& r : results) {
        std::printf("%-40s exit %d%s%s\n", r.member.name.c_str(), r.exit_code, r.error.empty() ? "" : "  ",
                    r.error.c_str());
        code = std::max(code, r.exit_code == 1 ? 1 : (r.exit_code != 0 ? kExitAborted : 0));
      }
      return code;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const BlowUpError& e) {
    std::cerr << "aborted: " << e.what() << "\n";
    return kExitAborted;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitAborted;
  }
  return 0;
}
