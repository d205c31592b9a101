#pragma once

#include <array>
#include <cstdint>
#include <functional>

#include "nsstab/field.hpp"

namespace nsstab {

/// Converts between physical values and Fourier coefficients. Returns a copy
/// when the field is already in the target representation.
Field transform(const Field& field, Representation target);

inline Field to_spectral(const Field& f) { return transform(f, Representation::spectral); }
inline Field to_physical(const Field& f) { return transform(f, Representation::physical); }

/// Samples a function at the collocation points x_i = i·L/N. Points of a 2D
/// grid are passed with x3 = 0.
using PointFunction = std::function<std::array<double, 3>(double x1, double x2, double x3)>;
Field sample(const TorusGrid& grid, int components, const PointFunction& fn);

/// Applies (i k_axis)^order to every mode. Odd orders annihilate the Nyquist
/// mode of that axis. The result is spectral.
Field spectral_derivative(const Field& field, int axis, int order);

/// ∂_axis of every component; component c·dim + axis holds ∂_axis f_c.
Field gradient(const Field& field);
Field laplacian(const Field& field);
/// Scalar field i k·f̂ (vector input with dim components).
Field divergence(const Field& field);
/// ‖div f‖_{L2} / ‖∇f‖_{L2}; zero for a field with no gradient.
double relative_divergence(const Field& field);

/// Modewise projection onto divergence-free fields, f̂ − k(k·f̂)/|k|².
Field leray_project(const Field& field);

/// Zeros every mode with some 3|m_i| >= N (sharp two-thirds truncation).
Field dealias(const Field& field);

MeanVector mean(const Field& field);
/// Removes the k = 0 coefficient. The result is spectral, so mean() of it is
/// exactly zero.
Field mean_free(const Field& field);

/// Random band-limited (3|m_i| < N), mean-free, divergence-free vector field
/// with mode amplitudes ∝ |k|^(−spectrum_decay). Deterministic in the seed.
Field random_divfree_field(const TorusGrid& grid, std::uint64_t seed, double spectrum_decay);

/// Trigonometric interpolant of f evaluated on the grid refined by `factor`
/// (physical representation on an (factor·N)^dim grid).
Field to_physical_padded(const Field& field, int factor = 2);

/// Embeds an x3-independent field on a 2D grid into the 3D grid with the same
/// L and N. Vector fields (two components) gain a zero third component.
Field lift_to_3d(const Field& field2d);

/// Inverse of lift_to_3d; throws if the field depends on x3 or, for vector
/// fields, if the third component is nonzero.
Field restrict_to_2d(const Field& field3d, double tolerance = 1e-12);

/// Largest pointwise |a − b| over all components.
double max_abs_difference(const Field& a, const Field& b);

}  // namespace nsstab
