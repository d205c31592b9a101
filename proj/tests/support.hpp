#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <numbers>

#include "nsstab/field.hpp"
#include "nsstab/grid.hpp"
#include "nsstab/spectral.hpp"

namespace testing {

inline constexpr double pi = std::numbers::pi;

// Spectral field from a pointwise formula of (x1, x2, x3).
inline nsstab::Field field_of(const nsstab::TorusGrid& g, int comps,
                              std::function<std::array<double, 3>(double, double, double)> fn) {
  return nsstab::to_spectral(nsstab::sample(g, comps, fn));
}

inline nsstab::Field scalar_of(const nsstab::TorusGrid& g, std::function<double(double, double, double)> fn) {
  return field_of(g, 1, [&](double x, double y, double z) { return std::array<double, 3>{fn(x, y, z), 0.0, 0.0}; });
}

inline nsstab::Field taylor_green(const nsstab::TorusGrid& g, double amp = 1.0) {
  const int comps = g.dim() == 2 ? 2 : 3;
  return field_of(g, comps, [=](double x, double y, double) {
    return std::array<double, 3>{amp * std::sin(x) * std::cos(y), -amp * std::cos(x) * std::sin(y), 0.0};
  });
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace testing
