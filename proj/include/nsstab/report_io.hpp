#pragma once

#include <string>
#include <vector>

#include "nsstab/estimates.hpp"

namespace nsstab {

/// One row of windows.csv. Entries that do not apply to a run are NaN.
struct WindowRow {
  int window = 0;
  double t0 = 0.0;
  double t1 = 0.0;
  double base_l2_sq_end = 0.0;
  double base_grad_l2_sq_end = 0.0;
  double base_forcing_integral = 0.0;
  double X2_start = 0.0;
  double X2_end = 0.0;
  double X2_max = 0.0;
  double int_A2 = 0.0;
  double int_G2 = 0.0;
  double endpoint_bound = 0.0;
  bool envelope_aborted = false;
};

std::string windows_csv(const std::vector<WindowRow>& rows);

/// JSON object keyed by inequality id; each entry carries description,
/// status, tolerance, worst margin and time, note, times and margins.
std::string inequalities_json(const ReportSet& set);
ReportSet parse_inequalities_json(const std::string& text);

/// Table of id, status, worst margin, tolerance and worst time. When any
/// report failed the first line is "FAIL <id> ...", otherwise "OK ...".
std::string summary_text(const ReportSet& set);

/// 0 when every report passed, is vacuous or informational; 1 otherwise.
int exit_code(const ReportSet& set);

}  // namespace nsstab
