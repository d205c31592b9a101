#include "nsstab/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <nlohmann/json.hpp>
#include <stdexcept>

namespace nsstab {

using json = nlohmann::ordered_json;

namespace {

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double read_number(const json& j) { return j.is_null() ? std::nan("") : j.get<double>(); }

Status status_from_string(const std::string& s) {
  if (s == "pass") return Status::pass;
  if (s == "fail") return Status::fail;
  if (s == "vacuous") return Status::vacuous;
  if (s == "info") return Status::info;
  throw std::runtime_error("unknown status '" + s + "'");
}

}  // namespace

std::string windows_csv(const std::vector<WindowRow>& rows) {
  std::string out =
      "window,t0,t1,base_l2_sq_end,base_grad_l2_sq_end,base_forcing_integral,X2_start,X2_end,X2_max,int_A2,int_G2,"
      "endpoint_bound,envelope_aborted\n";
  char buf[512];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n",
                  r.window, r.t0, r.t1, r.base_l2_sq_end, r.base_grad_l2_sq_end, r.base_forcing_integral,
                  r.X2_start, r.X2_end, r.X2_max, r.int_A2, r.int_G2, r.endpoint_bound, int(r.envelope_aborted));
    out += buf;
  }
  return out;
}

std::string inequalities_json(const ReportSet& set) {
  json out = json::object();
  for (const auto& r : set.reports) {
    json m = json::array(), t = json::array();
    for (double v : r.margins) m.push_back(number(v));
    for (double v : r.times) t.push_back(v);
    out[r.id] = {{"description", r.description},
                 {"status", to_string(r.status)},
                 {"tolerance", number(r.tolerance)},
                 {"worst_margin", number(r.worst_margin)},
                 {"worst_time", r.worst_time},
                 {"note", r.note},
                 {"times", t},
                 {"margins", m}};
  }
  return out.dump(2) + "\n";
}

ReportSet parse_inequalities_json(const std::string& text) {
  ReportSet set;
  try {
    const json in = json::parse(text);
    if (!in.is_object()) throw std::runtime_error("inequalities: expected an object");
    for (const auto& [id, e] : in.items()) {
      InequalityReport r;
      r.id = id;
      r.description = e.at("description").get<std::string>();
      r.status = status_from_string(e.at("status").get<std::string>());
      r.tolerance = read_number(e.at("tolerance"));
      r.worst_margin = read_number(e.at("worst_margin"));
      r.worst_time = e.at("worst_time").get<double>();
      r.note = e.value("note", "");
      for (const auto& v : e.at("times")) r.times.push_back(v.get<double>());
      for (const auto& v : e.at("margins")) r.margins.push_back(read_number(v));
      set.add(std::move(r));
    }
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("inequalities: ") + e.what());
  }
  return set;
}

std::string summary_text(const ReportSet& set) {
  std::string out;
  const InequalityReport* first_fail = nullptr;
  int counts[4] = {0, 0, 0, 0};
  for (const auto& r : set.reports) {
    ++counts[int(r.status)];
    if (r.status == Status::fail && !first_fail) first_fail = &r;
  }
  char buf[512];
  if (first_fail) {
    std::snprintf(buf, sizeof buf, "FAIL %s worst margin %.6g at t=%.6g (tolerance %.3g)\n", first_fail->id.c_str(),
                  first_fail->worst_margin, first_fail->worst_time, first_fail->tolerance);
  } else {
    std::snprintf(buf, sizeof buf, "OK %d pass, %d vacuous, %d info\n", counts[int(Status::pass)],
                  counts[int(Status::vacuous)], counts[int(Status::info)]);
  }
  out += buf;
  std::snprintf(buf, sizeof buf, "%-16s %-8s %16s %12s %12s\n", "id", "status", "worst_margin", "tolerance",
                "worst_t");
  out += buf;
  for (const auto& r : set.reports) {
    std::snprintf(buf, sizeof buf, "%-16s %-8s %16.8g %12.3g %12.6g\n", r.id.c_str(), to_string(r.status).c_str(),
                  r.worst_margin, r.tolerance, r.worst_time);
    out += buf;
  }
  return out;
}

int exit_code(const ReportSet& set) { return set.any_fail() ? 1 : 0; }

}  // namespace nsstab
