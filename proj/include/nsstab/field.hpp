#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "nsstab/grid.hpp"

namespace nsstab {

using Complex = std::complex<double>;

enum class Representation { physical, spectral };

/// A scalar, vector or tensor field on a TorusGrid.
///
/// Physical data hold one real value per grid point and component (row-major,
/// last axis fastest). Spectral data hold normalized Fourier coefficients
///   f(x) = Σ_k f̂_k e^{ik·x},
/// so the k = 0 coefficient is the mean value. Only one representation is
/// stored at a time.
class Field {
 public:
  Field() = default;
  Field(TorusGrid grid, int components, Representation rep);

  const TorusGrid& grid() const { return grid_; }
  int components() const { return components_; }
  Representation representation() const { return rep_; }
  bool is_spectral() const { return rep_ == Representation::spectral; }

  std::span<double> physical(int c);
  std::span<const double> physical(int c) const;
  std::span<Complex> spectral(int c);
  std::span<const Complex> spectral(int c) const;

  /// Raw storage of the active representation, all components back to back.
  std::span<double> physical_data() { return real_; }
  std::span<const double> physical_data() const { return real_; }
  std::span<Complex> spectral_data() { return coef_; }
  std::span<const Complex> spectral_data() const { return coef_; }

  bool divergence_free() const { return divergence_free_; }
  void set_divergence_free(bool flag) { divergence_free_ = flag; }
  double time() const { return time_; }
  void set_time(double t) { time_ = t; }

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double s);

  /// True when every stored value is finite.
  bool all_finite() const;

 private:
  TorusGrid grid_;
  int components_ = 0;
  Representation rep_ = Representation::spectral;
  std::vector<double> real_;
  std::vector<Complex> coef_;
  bool divergence_free_ = false;
  double time_ = 0.0;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);

/// Spatial mean of a field (one entry per component, at most three).
struct MeanVector {
  std::array<double, 3> value{0.0, 0.0, 0.0};
  double time = 0.0;

  double norm_sq() const {
    return value[0] * value[0] + value[1] * value[1] + value[2] * value[2];
  }
  bool operator==(const MeanVector&) const = default;
};

}  // namespace nsstab
