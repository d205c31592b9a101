#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <vector>

namespace nsstab {

namespace detail {
struct GridTables;
}

/// Uniform discretization of the periodic box [0,L]^3.
///
/// A grid of dimension 2 represents fields that do not depend on x3; such
/// fields still live on the three-dimensional box, so every integral over the
/// domain carries the full volume L^3. Spectral data use the real-to-complex
/// layout: the last axis stores only the nonnegative modes 0..N/2.
class TorusGrid {
 public:
  TorusGrid() = default;

  double length() const { return L_; }
  int points() const { return N_; }
  int dim() const { return dim_; }

  /// 2π/L, the spacing of the wavenumber lattice.
  double wavenumber_scale() const;
  double spacing() const { return L_ / N_; }
  /// Volume of the box; always L^3.
  double volume() const { return L_ * L_ * L_; }

  std::size_t physical_size() const;
  std::size_t spectral_size() const;
  int half_points() const { return N_ / 2 + 1; }

  /// Integer mode number m ∈ [−N/2, N/2) of a full (non-halved) axis index.
  int mode(int index) const { return index < N_ / 2 ? index : index - N_; }

  /// Wavenumbers (2π/L)·m of a full axis in FFT storage order.
  std::vector<double> wavenumbers() const;

  const detail::GridTables& tables() const { return *tables_; }

  bool operator==(const TorusGrid& other) const {
    return L_ == other.L_ && N_ == other.N_ && dim_ == other.dim_;
  }

 private:
  friend TorusGrid make_grid(double, int, int);

  double L_ = 0.0;
  int N_ = 0;
  int dim_ = 0;
  std::shared_ptr<const detail::GridTables> tables_;
};

/// Builds a grid. Rejects L <= 0, odd N, N < 4 and dim outside {2, 3}.
TorusGrid make_grid(double L, int N, int dim);

/// The grid with the same L and N but the other dimension.
TorusGrid with_dim(const TorusGrid& grid, int dim);

namespace detail {

/// Per-mode lookup tables shared by every field on a grid.
struct GridTables {
  // signed mode numbers per spectral index (axes beyond dim are 0)
  std::vector<std::array<int, 3>> m;
  // first-derivative wavenumbers; Nyquist entries are zero
  std::vector<std::array<double, 3>> kd;
  // (2π/L)·m including Nyquist, used by even-order derivatives
  std::vector<std::array<double, 3>> k;
  // Σ k_i², Σ kd_i², and the squared Hessian multiplier Σ_ij (D_i D_j)²
  std::vector<double> k_sq;
  std::vector<double> kd_sq;
  std::vector<double> hess_sq;
  // multiplicity of a stored mode in the full spectrum (1 or 2)
  std::vector<double> weight;
  // true when every 3|m_i| < N
  std::vector<unsigned char> keep;
};

}  // namespace detail
}  // namespace nsstab
