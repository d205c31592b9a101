#include "nsstab/trajectory_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>

#include "nsstab/norms.hpp"
#include "nsstab/snapshot_io.hpp"

namespace nsstab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

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

// NaN and infinities are not representable in JSON; store them as null
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::string diagnostics_csv(const std::vector<StepDiagnostics>& diags) {
  std::string out = StepDiagnostics::csv_header() + "\n";
  for (const auto& d : diags) out += d.csv_row() + "\n";
  return out;
}

std::vector<StepDiagnostics> parse_diagnostics_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != StepDiagnostics::csv_header()) {
    throw std::runtime_error("diagnostics.csv: unexpected header");
  }
  std::vector<StepDiagnostics> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    double v[19];
    const char* p = line.c_str();
    for (int i = 0; i < 19; ++i) {
      char* end = nullptr;
      v[i] = std::strtod(p, &end);
      if (end == p || (i < 18 && *end != ',') || (i == 18 && *end != '\0')) {
        throw std::runtime_error("diagnostics.csv:" + std::to_string(lineno) + ": malformed row");
      }
      p = end + 1;
    }
    StepDiagnostics d;
    d.t = v[0];
    d.l2_sq = v[1];
    d.grad_l2_sq = v[2];
    d.h1_sq = v[3];
    d.h2_sq = v[4];
    for (int c = 0; c < 3; ++c) {
      d.mean.value[c] = v[5 + c];
      d.ode_mean.value[c] = v[8 + c];
      d.forcing_mean.value[c] = v[11 + c];
    }
    d.mean.time = d.ode_mean.time = d.forcing_mean.time = d.t;
    d.forcing_l2_sq = v[14];
    d.forcing_l65_sq = v[15];
    d.shear_l3_sq = v[16];
    d.w1_sigma = v[17];
    d.divergence = v[18];
    out.push_back(d);
  }
  return out;
}

void write_trajectory(const fs::path& dir, const Trajectory& traj, const TrajectoryMeta& meta, int disk_stride) {
  if (disk_stride < 1) throw std::invalid_argument("write_trajectory: disk stride must be >= 1");
  fs::create_directories(dir / "snapshots");
  for (const auto& e : fs::directory_iterator(dir / "snapshots")) fs::remove(e.path());
  dump(dir / "config.yaml", meta.config_text);

  int written = 0;
  for (std::size_t i = 0; i < traj.snapshots.size(); i += std::size_t(disk_stride)) {
    char name[32];
    std::snprintf(name, sizeof name, "snap_%06zu.bin", i * std::size_t(traj.snapshot_stride));
    write_snapshot(dir / "snapshots" / name, traj.snapshots[i]);
    ++written;
  }
  dump(dir / "diagnostics.csv", diagnostics_csv(traj.diagnostics));

  json s;
  s["kind"] = traj.kind;
  s["dt"] = traj.dt;
  s["nu"] = traj.nu;
  s["T"] = traj.T;
  s["steps"] = traj.diagnostics.empty() ? 0 : int(traj.diagnostics.size()) - 1;
  s["snapshot_stride"] = traj.snapshot_stride * disk_stride;
  s["snapshots_written"] = written;
  s["config_hash"] = traj.config_hash;
  s["t_begin"] = traj.diagnostics.empty() ? 0.0 : traj.diagnostics.front().t;
  s["t_end"] = traj.diagnostics.empty() ? 0.0 : traj.diagnostics.back().t;
  s["status"] = meta.aborted ? "aborted" : "complete";
  if (meta.aborted) {
    s["abort_time"] = meta.abort_time;
    s["abort_report"] = meta.abort_report;
  }
  if (!traj.diagnostics.empty()) {
    const auto& d = traj.diagnostics.back();
    s["final"] = {{"l2_sq", number(d.l2_sq)},         {"grad_l2_sq", number(d.grad_l2_sq)},
                  {"h1_sq", number(d.h1_sq)},         {"h2_sq", number(d.h2_sq)},
                  {"mean", d.mean.value},             {"divergence", number(d.divergence)},
                  {"w1_sigma", number(d.w1_sigma)}};
  }
  if (!meta.convergence_json.empty()) s["convergence"] = json::parse(meta.convergence_json);
  dump(dir / "summary.json", s.dump(2) + "\n");
}

Trajectory read_trajectory(const fs::path& dir, TrajectoryMeta* meta) {
  if (!fs::is_directory(dir)) throw std::runtime_error("no trajectory directory " + dir.string());
  json s;
  try {
    s = json::parse(slurp(dir / "summary.json"));
  } catch (const json::exception& e) {
    throw std::runtime_error(dir.string() + "/summary.json: " + e.what());
  }
  Trajectory traj;
  try {
    traj.kind = s.at("kind").get<std::string>();
    traj.dt = s.at("dt").get<double>();
    traj.nu = s.at("nu").get<double>();
    traj.T = s.at("T").get<double>();
    traj.snapshot_stride = s.at("snapshot_stride").get<int>();
    traj.config_hash = s.at("config_hash").get<std::string>();
  } catch (const json::exception& e) {
    throw std::runtime_error(dir.string() + "/summary.json: " + e.what());
  }
  traj.diagnostics = parse_diagnostics_csv(slurp(dir / "diagnostics.csv"));

  std::vector<fs::path> files;
  if (fs::is_directory(dir / "snapshots")) {
    for (const auto& e : fs::directory_iterator(dir / "snapshots"))
      if (e.path().extension() == ".bin") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) traj.snapshots.push_back(read_snapshot(f));

  if (meta) {
    meta->config_text = fs::exists(dir / "config.yaml") ? slurp(dir / "config.yaml") : std::string();
    meta->aborted = s.value("status", "complete") == "aborted";
    meta->abort_time = s.value("abort_time", 0.0);
    meta->abort_report = s.value("abort_report", "");
    meta->convergence_json = s.contains("convergence") ? s["convergence"].dump() : std::string();
  }
  return traj;
}

}  // namespace nsstab
