#include "nsstab/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <set>

#include "nsstab/estimates.hpp"
#include "nsstab/expression.hpp"
#include "nsstab/grid.hpp"

namespace nsstab {

namespace {

std::string where(const YAML::Node& n) {
  const auto m = n.Mark();
  return m.line >= 0 ? "line " + std::to_string(m.line + 1) + ": " : std::string();
}

[[noreturn]] void fail(const YAML::Node& n, const std::string& msg) { throw ConfigError(where(n) + msg); }

void allow(const YAML::Node& map, const std::string& section, std::initializer_list<const char*> keys) {
  if (!map.IsMap()) fail(map, "'" + section + "' must be a mapping");
  const std::set<std::string> known(keys.begin(), keys.end());
  for (const auto& kv : map) {
    const std::string k = kv.first.as<std::string>();
    if (!known.count(k)) fail(kv.first, "unknown key '" + k + "' in " + section);
  }
}

class Reader {
 public:
  explicit Reader(const std::map<std::string, double>* constants) : constants_(constants) {}

  double number(const YAML::Node& n, const std::string& key) const {
    if (!n.IsScalar()) fail(n, key + ": expected a number");
    double v = 0.0;
    if (YAML::convert<double>::decode(n, v)) return v;
    try {
      const Expression e = Expression::parse(n.Scalar(), *constants_);
      for (const char* var : {"x1", "x2", "x3", "t"})
        if (e.depends_on(var)) fail(n, key + ": expected a constant, found variable " + var);
      return e(0.0, 0.0, 0.0, 0.0);
    } catch (const std::invalid_argument& e) {
      fail(n, key + ": " + e.what());
    }
  }

  int integer(const YAML::Node& n, const std::string& key) const {
    const double v = number(n, key);
    if (v != std::floor(v) || std::abs(v) > 2e9) fail(n, key + ": expected an integer");
    return int(v);
  }

  bool boolean(const YAML::Node& n, const std::string& key) const {
    bool v = false;
    if (!n.IsScalar() || !YAML::convert<bool>::decode(n, v)) fail(n, key + ": expected true or false");
    return v;
  }

  std::string text(const YAML::Node& n, const std::string& key) const {
    if (!n.IsScalar()) fail(n, key + ": expected a string");
    return n.Scalar();
  }

  std::uint64_t seed(const YAML::Node& n, const std::string& key) const {
    std::uint64_t v = 0;
    if (!n.IsScalar() || !YAML::convert<std::uint64_t>::decode(n, v)) {
      fail(n, key + ": expected a nonnegative integer");
    }
    return v;
  }

  std::vector<double> numbers(const YAML::Node& n, const std::string& key) const {
    if (!n.IsSequence()) fail(n, key + ": expected a list of numbers");
    std::vector<double> out;
    for (const auto& e : n) out.push_back(number(e, key));
    return out;
  }

  // Parses expressions to catch errors early; dim = 2 forbids x3.
  std::vector<std::string> expressions(const YAML::Node& n, const std::string& key, int min_comps, int max_comps,
                                       bool two_d) const {
    if (!n.IsSequence()) fail(n, key + ": expected a list of expressions");
    const int count = int(n.size());
    if (count < min_comps || count > max_comps) {
      fail(n, key + ": expected " + std::to_string(min_comps) +
                  (max_comps != min_comps ? " or " + std::to_string(max_comps) : std::string()) + " components");
    }
    std::vector<std::string> out;
    for (int i = 0; i < count; ++i) {
      const YAML::Node e = n[i];
      const std::string s = text(e, key);
      try {
        const Expression ex = Expression::parse(s, *constants_);
        if (two_d && ex.depends_on("x3")) fail(e, key + ": two-dimensional data may not depend on x3");
        if (two_d && i == 2 && !ex.is_zero()) fail(e, key + ": the third component of 2D data must be 0");
      } catch (const std::invalid_argument& err) {
        fail(e, key + ": " + err.what());
      }
      out.push_back(s);
    }
    return out;
  }

 private:
  const std::map<std::string, double>* constants_;
};

FieldSource parse_initial(const Reader& r, const YAML::Node& n, const std::string& section, bool two_d) {
  allow(n, section, {"kind", "components", "seed", "decay", "h1_sq", "mean"});
  FieldSource s;
  if (n["kind"]) {
    const std::string k = r.text(n["kind"], section + ".kind");
    if (k == "zero") s.kind = FieldSource::Kind::zero;
    else if (k == "expression") s.kind = FieldSource::Kind::expression;
    else if (k == "random") s.kind = FieldSource::Kind::random;
    else fail(n["kind"], section + ".kind: expected zero, expression or random");
  } else if (n["components"]) {
    s.kind = FieldSource::Kind::expression;
  }
  const int comps = two_d ? 2 : 3;
  if (n["components"]) {
    if (s.kind != FieldSource::Kind::expression) fail(n["components"], section + ": components need kind expression");
    s.components = r.expressions(n["components"], section + ".components", comps, 3, two_d);
  } else if (s.kind == FieldSource::Kind::expression) {
    fail(n, section + ": kind expression needs components");
  }
  for (const char* key : {"seed", "decay", "h1_sq", "mean"}) {
    if (n[key] && s.kind != FieldSource::Kind::random) fail(n[key], section + "." + key + ": needs kind random");
  }
  if (n["seed"]) s.seed = r.seed(n["seed"], section + ".seed");
  if (n["decay"]) {
    s.decay = r.number(n["decay"], section + ".decay");
    if (!(s.decay > 0.0)) fail(n["decay"], section + ".decay: must be positive");
  }
  if (n["h1_sq"]) s.h1_sq = r.number(n["h1_sq"], section + ".h1_sq");
  if (n["mean"]) {
    const auto m = r.numbers(n["mean"], section + ".mean");
    if (int(m.size()) != comps) fail(n["mean"], section + ".mean: expected " + std::to_string(comps) + " entries");
    for (int c = 0; c < comps; ++c) s.mean[c] = m[c];
  }
  return s;
}

ForcingSource parse_forcing(const Reader& r, const YAML::Node& n, const std::string& section, bool two_d) {
  allow(n, section, {"kind", "components", "dir"});
  ForcingSource f;
  if (n["kind"]) {
    const std::string k = r.text(n["kind"], section + ".kind");
    if (k == "zero") f.kind = ForcingSpec::Kind::zero;
    else if (k == "analytic") f.kind = ForcingSpec::Kind::analytic;
    else if (k == "snapshots") f.kind = ForcingSpec::Kind::snapshots;
    else fail(n["kind"], section + ".kind: expected zero, analytic or snapshots");
  } else if (n["components"]) {
    f.kind = ForcingSpec::Kind::analytic;
  } else if (n["dir"]) {
    f.kind = ForcingSpec::Kind::snapshots;
  }
  if (n["components"]) {
    if (f.kind != ForcingSpec::Kind::analytic) fail(n["components"], section + ": components need kind analytic");
    f.components = r.expressions(n["components"], section + ".components", two_d ? 2 : 3, 3, two_d);
  } else if (f.kind == ForcingSpec::Kind::analytic) {
    fail(n, section + ": kind analytic needs components");
  }
  if (n["dir"]) {
    if (f.kind != ForcingSpec::Kind::snapshots) fail(n["dir"], section + ": dir needs kind snapshots");
    f.dir = r.text(n["dir"], section + ".dir");
  } else if (f.kind == ForcingSpec::Kind::snapshots) {
    fail(n, section + ": kind snapshots needs dir");
  }
  return f;
}

RunBlock parse_block(const Reader& r, const YAML::Node& n, const std::string& section, bool two_d) {
  allow(n, section, {"enabled", "initial", "forcing"});
  RunBlock b;
  if (n["enabled"]) b.enabled = r.boolean(n["enabled"], section + ".enabled");
  if (n["initial"]) b.initial = parse_initial(r, n["initial"], section + ".initial", two_d);
  if (n["forcing"]) b.forcing = parse_forcing(r, n["forcing"], section + ".forcing", two_d);
  return b;
}

const char* kind_name(FieldSource::Kind k) {
  switch (k) {
    case FieldSource::Kind::zero:
      return "zero";
    case FieldSource::Kind::expression:
      return "expression";
    case FieldSource::Kind::random:
      return "random";
  }
  return "zero";
}

const char* kind_name(ForcingSpec::Kind k) {
  switch (k) {
    case ForcingSpec::Kind::zero:
      return "zero";
    case ForcingSpec::Kind::analytic:
      return "analytic";
    case ForcingSpec::Kind::snapshots:
      return "snapshots";
  }
  return "zero";
}

void emit_strings(YAML::Emitter& out, const std::vector<std::string>& v) {
  out << YAML::BeginSeq;
  for (const auto& s : v) out << YAML::DoubleQuoted << s;
  out << YAML::EndSeq;
}

void emit_block(YAML::Emitter& out, const char* name, const RunBlock& b, int comps) {
  out << YAML::Key << name << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "enabled" << YAML::Value << b.enabled;
  out << YAML::Key << "initial" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << kind_name(b.initial.kind);
  if (b.initial.kind == FieldSource::Kind::expression) {
    out << YAML::Key << "components" << YAML::Value;
    emit_strings(out, b.initial.components);
  }
  if (b.initial.kind == FieldSource::Kind::random) {
    out << YAML::Key << "seed" << YAML::Value << b.initial.seed;
    out << YAML::Key << "decay" << YAML::Value << b.initial.decay;
    out << YAML::Key << "h1_sq" << YAML::Value << b.initial.h1_sq;
    out << YAML::Key << "mean" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (int c = 0; c < comps; ++c) out << b.initial.mean[c];
    out << YAML::EndSeq;
  }
  out << YAML::EndMap;
  out << YAML::Key << "forcing" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << kind_name(b.forcing.kind);
  if (b.forcing.kind == ForcingSpec::Kind::analytic) {
    out << YAML::Key << "components" << YAML::Value;
    emit_strings(out, b.forcing.components);
  }
  if (b.forcing.kind == ForcingSpec::Kind::snapshots) {
    out << YAML::Key << "dir" << YAML::Value << YAML::DoubleQuoted << b.forcing.dir;
  }
  out << YAML::EndMap;
  out << YAML::EndMap;
}

void emit_list(YAML::Emitter& out, const char* key, const std::vector<double>& v) {
  if (v.empty()) return;
  out << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (double x : v) out << x;
  out << YAML::EndSeq;
}

}  // namespace

std::map<std::string, double> ExperimentSpec::expression_constants() const {
  std::map<std::string, double> c = constants;
  c.emplace("nu", nu);
  c.emplace("L", L);
  return c;
}

void check_budget_overrides(const BudgetOverrides& b, double nu) {
  auto positive = [](const std::optional<double>& v, const char* name) {
    if (v && !(*v > 0.0)) throw ConfigError(std::string("budget.") + name + " must be positive");
  };
  positive(b.c1, "c1");
  positive(b.c3, "c3");
  positive(b.c4, "c4");
  positive(b.c5, "c5");
  positive(b.gamma, "gamma");
  positive(b.gamma_star, "gamma_star");
  positive(b.c_star, "c_star");
  if (b.alpha && !(*b.alpha > 0.0 && *b.alpha < 1.0)) throw ConfigError("budget.alpha must lie in (0,1)");
  if (!(b.theta > 0.0 && b.theta < 1.0)) throw ConfigError("budget.theta must lie in (0,1)");
  if (!(b.c_star_fraction > 0.0 && b.c_star_fraction < 1.0)) {
    throw ConfigError("budget.c_star_fraction must lie in (0,1) so that c* < νc4 (condition 4.19)");
  }
  if (!(b.gamma_fraction > 0.0 && b.gamma_fraction <= 1.0)) {
    throw ConfigError("budget.gamma_fraction must lie in (0,1] so that γ <= γ* (condition 4.19)");
  }
  if (b.ensemble < 100) throw ConfigError("budget.ensemble must be at least 100");
  if (b.c4 && b.c_star && !(*b.c_star < nu * *b.c4)) {
    throw ConfigError("budget refused: condition 4.19 requires c* < νc4");
  }
  if (b.c4 && b.c5 && b.c_star && b.gamma_star && eq419_margin(nu, *b.c4, *b.c5, *b.gamma_star, *b.c_star) < 0.0) {
    throw ConfigError("budget refused: condition 4.19 requires νc4 − (c5/ν³)γ*² >= c*/2");
  }
  if (b.gamma && b.gamma_star && *b.gamma > *b.gamma_star) {
    throw ConfigError("budget refused: γ exceeds γ* (condition 4.19)");
  }
}

ExperimentSpec parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError("line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (!root.IsMap()) throw ConfigError("configuration must be a mapping");
  allow(root, "configuration",
        {"scenario", "seed", "output", "grid", "nu", "dt", "T", "windows", "scheme", "sigma", "snapshot_stride",
         "blowup_threshold", "constants", "base", "perturbation", "direct", "budget", "checks", "sweep"});

  ExperimentSpec s;
  const std::map<std::string, double> none;
  Reader plain(&none);

  if (root["constants"]) {
    const YAML::Node c = root["constants"];
    if (!c.IsMap()) fail(c, "constants must be a mapping");
    for (const auto& kv : c) {
      const std::string name = kv.first.as<std::string>();
      if (name == "nu" || name == "L" || name == "pi" || name == "e") {
        fail(kv.first, "constants: '" + name + "' is reserved");
      }
      // earlier constants may be used by later ones
      Reader r(&s.constants);
      s.constants[name] = r.number(kv.second, "constants." + name);
    }
  }

  if (root["scenario"]) s.scenario = plain.text(root["scenario"], "scenario");
  if (root["seed"]) s.seed = plain.seed(root["seed"], "seed");
  if (root["output"]) s.output = plain.text(root["output"], "output");

  Reader basic(&s.constants);
  if (!root["grid"]) throw ConfigError("missing required section 'grid'");
  {
    const YAML::Node g = root["grid"];
    allow(g, "grid", {"L", "N"});
    if (g["L"]) s.L = basic.number(g["L"], "grid.L");
    if (!g["N"]) fail(g, "grid: missing key N");
    s.N = basic.integer(g["N"], "grid.N");
    try {
      make_grid(s.L, s.N, 3);
    } catch (const std::invalid_argument& e) {
      fail(g, e.what());
    }
  }
  if (!root["nu"]) throw ConfigError("missing required key 'nu'");
  s.nu = basic.number(root["nu"], "nu");
  if (!(s.nu > 0.0)) fail(root["nu"], "nu must be positive");
  if (!root["dt"]) throw ConfigError("missing required key 'dt'");
  s.dt = basic.number(root["dt"], "dt");
  if (!(s.dt > 0.0)) fail(root["dt"], "dt must be positive");

  Reader r(nullptr);
  const auto consts = s.expression_constants();
  r = Reader(&consts);

  if (root["T"]) {
    s.T = r.number(root["T"], "T");
    if (!(s.T > 0.0)) fail(root["T"], "T must be positive");
  }
  {
    const double ratio = s.T / s.dt;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio || std::round(ratio) < 1) {
      fail(root["T"] ? root["T"] : root["dt"], "T must be a positive integer multiple of dt");
    }
  }
  if (root["windows"]) {
    s.windows = r.integer(root["windows"], "windows");
    if (s.windows < 1) fail(root["windows"], "windows must be >= 1");
  }
  if (root["scheme"]) {
    try {
      s.scheme = time_scheme_from_string(r.text(root["scheme"], "scheme"));
    } catch (const std::invalid_argument& e) {
      fail(root["scheme"], e.what());
    }
  }
  if (root["sigma"]) {
    s.sigma = r.number(root["sigma"], "sigma");
    if (!(s.sigma > 3.0)) fail(root["sigma"], "sigma must exceed 3");
  }
  if (root["snapshot_stride"]) {
    s.snapshot_stride = r.integer(root["snapshot_stride"], "snapshot_stride");
    if (s.snapshot_stride < 1) fail(root["snapshot_stride"], "snapshot_stride must be >= 1");
  }
  if (root["blowup_threshold"]) {
    s.blowup_threshold = r.number(root["blowup_threshold"], "blowup_threshold");
    if (!(s.blowup_threshold > 0.0)) fail(root["blowup_threshold"], "blowup_threshold must be positive");
  }

  if (root["base"]) {
    s.base = parse_block(r, root["base"], "base", true);
    if (!s.base.enabled) fail(root["base"], "base: the base run cannot be disabled");
    if (s.base.initial.kind == FieldSource::Kind::random && s.base.initial.mean[2] != 0.0) {
      fail(root["base"], "base.initial.mean: the third component must be 0");
    }
  }
  if (root["perturbation"]) s.perturbation = parse_block(r, root["perturbation"], "perturbation", false);
  if (root["direct"]) {
    const YAML::Node d = root["direct"];
    allow(d, "direct", {"enabled"});
    s.direct.enabled = d["enabled"] ? r.boolean(d["enabled"], "direct.enabled") : true;
    if (s.direct.enabled && !s.perturbation.enabled) fail(d, "direct: needs an enabled perturbation block");
    if (s.direct.enabled && (s.base.forcing.kind == ForcingSpec::Kind::snapshots ||
                             s.perturbation.forcing.kind == ForcingSpec::Kind::snapshots)) {
      fail(d, "direct: snapshot forcing cannot be summed; use analytic forcing");
    }
  }

  if (root["budget"]) {
    const YAML::Node b = root["budget"];
    allow(b, "budget",
          {"c1", "c3", "c4", "c5", "gamma", "gamma_star", "c_star", "alpha", "theta", "c_star_fraction",
           "gamma_fraction", "ensemble"});
    auto opt = [&](const char* key, std::optional<double>& dst) {
      if (b[key]) dst = r.number(b[key], std::string("budget.") + key);
    };
    opt("c1", s.budget.c1);
    opt("c3", s.budget.c3);
    opt("c4", s.budget.c4);
    opt("c5", s.budget.c5);
    opt("gamma", s.budget.gamma);
    opt("gamma_star", s.budget.gamma_star);
    opt("c_star", s.budget.c_star);
    opt("alpha", s.budget.alpha);
    if (b["theta"]) s.budget.theta = r.number(b["theta"], "budget.theta");
    if (b["c_star_fraction"]) s.budget.c_star_fraction = r.number(b["c_star_fraction"], "budget.c_star_fraction");
    if (b["gamma_fraction"]) s.budget.gamma_fraction = r.number(b["gamma_fraction"], "budget.gamma_fraction");
    if (b["ensemble"]) s.budget.ensemble = r.integer(b["ensemble"], "budget.ensemble");
    try {
      check_budget_overrides(s.budget, s.nu);
    } catch (const ConfigError& e) {
      fail(b, e.what());
    }
  }

  if (root["checks"]) {
    const YAML::Node c = root["checks"];
    allow(c, "checks", {"vorticity_threshold", "w1sigma_relative_tolerance", "mean_threshold", "dt_halving"});
    if (c["vorticity_threshold"]) s.checks.vorticity_threshold = r.number(c["vorticity_threshold"], "checks.vorticity_threshold");
    if (c["w1sigma_relative_tolerance"]) {
      s.checks.w1sigma_relative_tolerance = r.number(c["w1sigma_relative_tolerance"], "checks.w1sigma_relative_tolerance");
    }
    if (c["mean_threshold"]) s.checks.mean_threshold = r.number(c["mean_threshold"], "checks.mean_threshold");
    if (c["dt_halving"]) s.checks.dt_halving = r.boolean(c["dt_halving"], "checks.dt_halving");
  }

  if (root["sweep"]) {
    const YAML::Node w = root["sweep"];
    allow(w, "sweep", {"gamma_fraction", "T", "forcing_scale"});
    if (w["gamma_fraction"]) {
      s.sweep.gamma_fraction = r.numbers(w["gamma_fraction"], "sweep.gamma_fraction");
      for (double g : s.sweep.gamma_fraction)
        if (!(g > 0.0 && g <= 1.0)) fail(w["gamma_fraction"], "sweep.gamma_fraction: entries must lie in (0,1]");
    }
    if (w["T"]) {
      s.sweep.T = r.numbers(w["T"], "sweep.T");
      for (double T : s.sweep.T) {
        const double ratio = T / s.dt;
        if (!(T > 0.0) || std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
          fail(w["T"], "sweep.T: entries must be positive multiples of dt");
        }
      }
    }
    if (w["forcing_scale"]) {
      s.sweep.forcing_scale = r.numbers(w["forcing_scale"], "sweep.forcing_scale");
      if (s.perturbation.forcing.kind == ForcingSpec::Kind::snapshots) {
        fail(w["forcing_scale"], "sweep.forcing_scale: snapshot forcing cannot be scaled");
      }
    }
  }
  return s;
}

std::string emit_config(const ExperimentSpec& s) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "scenario" << YAML::Value << YAML::DoubleQuoted << s.scenario;
  out << YAML::Key << "seed" << YAML::Value << s.seed;
  if (!s.output.empty()) out << YAML::Key << "output" << YAML::Value << YAML::DoubleQuoted << s.output;
  out << YAML::Key << "grid" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "L" << YAML::Value << s.L;
  out << YAML::Key << "N" << YAML::Value << s.N;
  out << YAML::EndMap;
  out << YAML::Key << "nu" << YAML::Value << s.nu;
  out << YAML::Key << "dt" << YAML::Value << s.dt;
  out << YAML::Key << "T" << YAML::Value << s.T;
  out << YAML::Key << "windows" << YAML::Value << s.windows;
  out << YAML::Key << "scheme" << YAML::Value << to_string(s.scheme);
  out << YAML::Key << "sigma" << YAML::Value << s.sigma;
  out << YAML::Key << "snapshot_stride" << YAML::Value << s.snapshot_stride;
  out << YAML::Key << "blowup_threshold" << YAML::Value << s.blowup_threshold;
  if (!s.constants.empty()) {
    out << YAML::Key << "constants" << YAML::Value << YAML::BeginMap;
    for (const auto& [k, v] : s.constants) out << YAML::Key << k << YAML::Value << v;
    out << YAML::EndMap;
  }
  emit_block(out, "base", s.base, 2);
  emit_block(out, "perturbation", s.perturbation, 3);
  out << YAML::Key << "direct" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "enabled" << YAML::Value << s.direct.enabled;
  out << YAML::EndMap;

  out << YAML::Key << "budget" << YAML::Value << YAML::BeginMap;
  auto opt = [&](const char* key, const std::optional<double>& v) {
    if (v) out << YAML::Key << key << YAML::Value << *v;
  };
  opt("c1", s.budget.c1);
  opt("c3", s.budget.c3);
  opt("c4", s.budget.c4);
  opt("c5", s.budget.c5);
  opt("gamma", s.budget.gamma);
  opt("gamma_star", s.budget.gamma_star);
  opt("c_star", s.budget.c_star);
  opt("alpha", s.budget.alpha);
  out << YAML::Key << "theta" << YAML::Value << s.budget.theta;
  out << YAML::Key << "c_star_fraction" << YAML::Value << s.budget.c_star_fraction;
  out << YAML::Key << "gamma_fraction" << YAML::Value << s.budget.gamma_fraction;
  out << YAML::Key << "ensemble" << YAML::Value << s.budget.ensemble;
  out << YAML::EndMap;

  out << YAML::Key << "checks" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "vorticity_threshold" << YAML::Value << s.checks.vorticity_threshold;
  out << YAML::Key << "w1sigma_relative_tolerance" << YAML::Value << s.checks.w1sigma_relative_tolerance;
  out << YAML::Key << "mean_threshold" << YAML::Value << s.checks.mean_threshold;
  out << YAML::Key << "dt_halving" << YAML::Value << s.checks.dt_halving;
  out << YAML::EndMap;

  if (!s.sweep.empty()) {
    out << YAML::Key << "sweep" << YAML::Value << YAML::BeginMap;
    emit_list(out, "gamma_fraction", s.sweep.gamma_fraction);
    emit_list(out, "T", s.sweep.T);
    emit_list(out, "forcing_scale", s.sweep.forcing_scale);
    out << YAML::EndMap;
  }
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::string config_hash(const ExperimentSpec& spec) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : emit_config(spec)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace nsstab
