#pragma once

#include <cstdint>
#include <vector>

#include "nsstab/grid.hpp"

namespace nsstab {

struct CalibratedConstants {
  double c1 = 0.0;
  // largest ‖ū‖²_{L6}/‖ū‖²_{H¹} seen in the ensemble; a lower bound for c₃
  double c3 = 0.0;
  double c4 = 0.0;
  double c5 = 0.0;
  double theta = 0.5;
  int ensemble = 0;
  std::uint64_t seed = 0;
  // running maximum of the embedding ratio after each member
  std::vector<double> c3_history;
};

struct DerivedConstants {
  double c4 = 0.0;
  double c5 = 0.0;
};

/// c₄ and c₅ of the H¹ differential inequality for the given c₁, c₃ and box
/// side. theta ∈ (0,1) is the share of the dissipation spent on absorbing the
/// nonlinear and coupling terms. Formulae in docs/constants.md.
DerivedConstants derive_c4_c5(double c1, double c3, double L, double theta = 0.5);

/// Sharp c₁ and an ensemble lower bound for c₃ on the grid, plus c₄, c₅.
/// Requires ensemble >= 100.
CalibratedConstants calibrate_constants(const TorusGrid& grid, int ensemble, std::uint64_t seed,
                                        double theta = 0.5);

}  // namespace nsstab
