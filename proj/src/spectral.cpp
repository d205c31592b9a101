#include "nsstab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "fft.hpp"

namespace nsstab {

namespace {

using detail::GridTables;

Field as_spectral(const Field& f) { return f.is_spectral() ? f : to_spectral(f); }

void require_axis(const TorusGrid& grid, int axis) {
  if (axis < 0 || axis >= grid.dim()) {
    throw std::invalid_argument("spectral: axis " + std::to_string(axis) + " invalid for a " +
                                std::to_string(grid.dim()) + "D grid");
  }
}

// Storage offset of the mode (m1, m2[, m3]); the last mode must be in [0, N/2].
std::size_t offset_of(int N, int dim, const std::array<int, 3>& m) {
  const std::size_t nh = N / 2 + 1;
  auto full = [N](int mi) { return std::size_t((mi % N + N) % N); };
  if (dim == 2) return full(m[0]) * nh + std::size_t(m[1]);
  return (full(m[0]) * N + full(m[1])) * nh + std::size_t(m[2]);
}

}  // namespace

Field transform(const Field& field, Representation target) {
  if (field.representation() == target) return field;
  const auto& g = field.grid();
  Field out(g, field.components(), target);
  for (int c = 0; c < field.components(); ++c) {
    if (target == Representation::spectral) {
      detail::fft_forward(g.points(), g.dim(), field.physical(c), out.spectral(c));
    } else {
      detail::fft_backward(g.points(), g.dim(), field.spectral(c), out.physical(c));
    }
  }
  out.set_divergence_free(field.divergence_free());
  out.set_time(field.time());
  return out;
}

Field sample(const TorusGrid& grid, int components, const PointFunction& fn) {
  if (components < 1 || components > 3) throw std::invalid_argument("sample: 1 to 3 components");
  Field f(grid, components, Representation::physical);
  const int N = grid.points();
  const double h = grid.spacing();
  const int n3 = grid.dim() == 3 ? N : 1;
  std::size_t idx = 0;
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      for (int l = 0; l < n3; ++l, ++idx) {
        const auto v = fn(i * h, j * h, l * h);
        for (int c = 0; c < components; ++c) f.physical(c)[idx] = v[c];
      }
    }
  }
  return f;
}

Field spectral_derivative(const Field& field, int axis, int order) {
  require_axis(field.grid(), axis);
  if (order != 1 && order != 2) throw std::invalid_argument("spectral_derivative: order must be 1 or 2");
  Field out = as_spectral(field);
  const auto& t = out.grid().tables();
  for (int c = 0; c < out.components(); ++c) {
    auto s = out.spectral(c);
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (order == 1) {
        s[i] *= Complex(0.0, t.kd[i][axis]);
      } else {
        s[i] *= -t.k[i][axis] * t.k[i][axis];
      }
    }
  }
  return out;
}

Field gradient(const Field& field) {
  const Field f = as_spectral(field);
  const auto& g = f.grid();
  const auto& t = g.tables();
  const int d = g.dim();
  Field out(g, f.components() * d, Representation::spectral);
  for (int c = 0; c < f.components(); ++c) {
    auto s = f.spectral(c);
    for (int a = 0; a < d; ++a) {
      auto o = out.spectral(c * d + a);
      for (std::size_t i = 0; i < s.size(); ++i) o[i] = Complex(0.0, t.kd[i][a]) * s[i];
    }
  }
  out.set_time(f.time());
  return out;
}

Field laplacian(const Field& field) {
  Field out = as_spectral(field);
  const auto& t = out.grid().tables();
  for (int c = 0; c < out.components(); ++c) {
    auto s = out.spectral(c);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] *= -t.k_sq[i];
  }
  return out;
}

Field divergence(const Field& field) {
  const auto& g = field.grid();
  if (field.components() < g.dim()) throw std::invalid_argument("divergence: needs a vector field");
  const Field f = as_spectral(field);
  const auto& t = g.tables();
  Field out(g, 1, Representation::spectral);
  auto o = out.spectral(0);
  for (int a = 0; a < g.dim(); ++a) {
    auto s = f.spectral(a);
    for (std::size_t i = 0; i < s.size(); ++i) o[i] += Complex(0.0, t.kd[i][a]) * s[i];
  }
  out.set_time(f.time());
  return out;
}

double relative_divergence(const Field& field) {
  const Field div = divergence(field);
  const Field f = as_spectral(field);
  const auto& t = f.grid().tables();
  double num = 0.0, den = 0.0;
  auto d = div.spectral(0);
  for (std::size_t i = 0; i < d.size(); ++i) num += t.weight[i] * std::norm(d[i]);
  for (int c = 0; c < f.grid().dim(); ++c) {
    auto s = f.spectral(c);
    for (std::size_t i = 0; i < s.size(); ++i) den += t.weight[i] * t.kd_sq[i] * std::norm(s[i]);
  }
  return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

Field leray_project(const Field& field) {
  const auto& g = field.grid();
  const int d = g.dim();
  if (field.components() < d) throw std::invalid_argument("leray_project: needs a vector field");
  Field out = as_spectral(field);
  const auto& t = g.tables();
  const std::size_t n = g.spectral_size();
  for (std::size_t i = 0; i < n; ++i) {
    if (t.kd_sq[i] == 0.0) continue;
    Complex dot{};
    for (int a = 0; a < d; ++a) dot += t.kd[i][a] * out.spectral(a)[i];
    dot /= t.kd_sq[i];
    for (int a = 0; a < d; ++a) out.spectral(a)[i] -= t.kd[i][a] * dot;
  }
  out.set_divergence_free(true);
  return out;
}

Field dealias(const Field& field) {
  Field out = as_spectral(field);
  const auto& t = out.grid().tables();
  for (int c = 0; c < out.components(); ++c) {
    auto s = out.spectral(c);
    for (std::size_t i = 0; i < s.size(); ++i)
      if (!t.keep[i]) s[i] = Complex{};
  }
  return out;
}

MeanVector mean(const Field& field) {
  if (field.components() > 3) throw std::invalid_argument("mean: at most three components");
  MeanVector m;
  m.time = field.time();
  const Field f = as_spectral(field);
  for (int c = 0; c < f.components(); ++c) m.value[c] = f.spectral(c)[0].real();
  return m;
}

Field mean_free(const Field& field) {
  Field out = as_spectral(field);
  for (int c = 0; c < out.components(); ++c) out.spectral(c)[0] = Complex{};
  return out;
}

Field random_divfree_field(const TorusGrid& grid, std::uint64_t seed, double spectrum_decay) {
  if (!(spectrum_decay > 0.0)) throw std::invalid_argument("random_divfree_field: decay must be positive");
  const int d = grid.dim();
  Field f(grid, d, Representation::spectral);
  const auto& t = grid.tables();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int c = 0; c < d; ++c) {
    auto s = f.spectral(c);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      if (!t.keep[i] || t.k_sq[i] == 0.0) continue;
      s[i] = Complex(re, im) * std::pow(t.k_sq[i], -0.5 * spectrum_decay);
    }
  }
  // the round trip restores Hermitian symmetry on the self-conjugate planes
  f = to_spectral(to_physical(leray_project(f)));
  f = mean_free(dealias(leray_project(f)));
  f.set_divergence_free(true);
  return f;
}

Field to_physical_padded(const Field& field, int factor) {
  if (factor < 1) throw std::invalid_argument("to_physical_padded: factor must be >= 1");
  const Field f = as_spectral(field);
  const auto& g = f.grid();
  if (factor == 1) return to_physical(f);
  const int N = g.points();
  const int M = factor * N;
  const int d = g.dim();
  const TorusGrid fine = make_grid(g.length(), M, d);
  Field padded(fine, f.components(), Representation::spectral);
  const auto& t = g.tables();
  const std::size_t n = g.spectral_size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto m = t.m[i];
    // a coarse Nyquist mode is split evenly between ±N/2 on every full axis;
    // on the halved axis the conjugate partner is implicit
    double scale = 1.0;
    int copies = 1;
    for (int a = 0; a < d - 1; ++a) {
      if (m[a] == -N / 2) {
        scale *= 0.5;
        copies *= 2;
      }
    }
    std::array<int, 3> last_fix = m;
    if (m[d - 1] == -N / 2) {
      last_fix[d - 1] = N / 2;
      scale *= 0.5;
    }
    for (int mask = 0; mask < copies; ++mask) {
      std::array<int, 3> target = last_fix;
      int bit = 0;
      for (int a = 0; a < d - 1; ++a) {
        if (m[a] == -N / 2) {
          if (mask & (1 << bit)) target[a] = N / 2;
          ++bit;
        }
      }
      const std::size_t o = offset_of(M, d, target);
      for (int c = 0; c < f.components(); ++c) padded.spectral(c)[o] += scale * f.spectral(c)[i];
    }
  }
  padded.set_time(f.time());
  padded.set_divergence_free(f.divergence_free());
  return to_physical(padded);
}

Field lift_to_3d(const Field& field2d) {
  const auto& g = field2d.grid();
  if (g.dim() != 2) throw std::invalid_argument("lift_to_3d: field is not on a 2D grid");
  const TorusGrid g3 = with_dim(g, 3);
  const int N = g.points();
  const int nh = g.half_points();
  const int comps = field2d.components() == 2 ? 3 : field2d.components();
  if (!field2d.is_spectral()) {
    Field out(g3, comps, Representation::physical);
    for (int c = 0; c < field2d.components(); ++c) {
      auto src = field2d.physical(c);
      auto dst = out.physical(c);
      for (std::size_t p = 0; p < src.size(); ++p)
        std::fill_n(dst.begin() + p * N, N, src[p]);
    }
    out.set_divergence_free(field2d.divergence_free());
    out.set_time(field2d.time());
    return out;
  }
  Field out(g3, comps, Representation::spectral);
  for (int c = 0; c < field2d.components(); ++c) {
    auto src = field2d.spectral(c);
    auto dst = out.spectral(c);
    for (int i1 = 0; i1 < N; ++i1) {
      for (int j2 = 0; j2 < nh; ++j2) {
        const Complex v = src[std::size_t(i1) * nh + j2];
        dst[(std::size_t(i1) * N + j2) * nh] = v;
        if (j2 > 0 && j2 < N / 2) {
          // mode (m1, −m2, 0) is the conjugate of (−m1, m2, 0)
          const int i1n = (N - i1) % N;
          dst[(std::size_t(i1n) * N + (N - j2)) * nh] = std::conj(v);
        }
      }
    }
  }
  out.set_divergence_free(field2d.divergence_free());
  out.set_time(field2d.time());
  return out;
}

Field restrict_to_2d(const Field& field3d, double tolerance) {
  const auto& g = field3d.grid();
  if (g.dim() != 3) throw std::invalid_argument("restrict_to_2d: field is not on a 3D grid");
  const Field f = as_spectral(field3d);
  const TorusGrid g2 = with_dim(g, 2);
  const int N = g.points();
  const int nh = g.half_points();
  const auto& t = g.tables();
  double scale = 0.0;
  for (const auto& v : f.spectral_data()) scale = std::max(scale, std::abs(v));
  const double limit = tolerance * std::max(scale, 1.0);
  for (int c = 0; c < f.components(); ++c) {
    auto s = f.spectral(c);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const bool varies = t.m[i][2] != 0;
      const bool third = f.components() == 3 && c == 2;
      if ((varies || third) && std::abs(s[i]) > limit) {
        throw std::invalid_argument("restrict_to_2d: field is not two-dimensional");
      }
    }
  }
  const int comps = f.components() == 3 ? 2 : f.components();
  Field out(g2, comps, Representation::spectral);
  for (int c = 0; c < comps; ++c) {
    auto src = f.spectral(c);
    auto dst = out.spectral(c);
    for (int i1 = 0; i1 < N; ++i1)
      for (int j2 = 0; j2 < nh; ++j2) dst[std::size_t(i1) * nh + j2] = src[(std::size_t(i1) * N + j2) * nh];
  }
  out.set_divergence_free(f.divergence_free());
  out.set_time(f.time());
  return out;
}

double max_abs_difference(const Field& a, const Field& b) {
  const Field pa = a.is_spectral() ? to_physical(a) : a;
  const Field pb = b.is_spectral() ? to_physical(b) : b;
  if (!(pa.grid() == pb.grid()) || pa.components() != pb.components()) {
    throw std::invalid_argument("max_abs_difference: incompatible fields");
  }
  double worst = 0.0;
  auto x = pa.physical_data();
  auto y = pb.physical_data();
  for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x[i] - y[i]));
  return worst;
}

}  // namespace nsstab
