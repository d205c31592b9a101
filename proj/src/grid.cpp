#include "nsstab/grid.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <tuple>

namespace nsstab {

namespace {

std::shared_ptr<const detail::GridTables> build_tables(double L, int N, int dim) {
  auto t = std::make_shared<detail::GridTables>();
  const double scale = 2.0 * std::numbers::pi / L;
  const int nh = N / 2 + 1;
  const std::size_t n_full = dim == 3 ? std::size_t(N) * N : std::size_t(N);
  const std::size_t size = n_full * nh;
  t->m.resize(size);
  t->kd.resize(size);
  t->k.resize(size);
  t->k_sq.resize(size);
  t->kd_sq.resize(size);
  t->hess_sq.resize(size);
  t->weight.resize(size);
  t->keep.resize(size);

  auto signed_mode = [N](int i) { return i < N / 2 ? i : i - N; };

  std::size_t idx = 0;
  for (std::size_t outer = 0; outer < n_full; ++outer) {
    for (int j = 0; j < nh; ++j, ++idx) {
      std::array<int, 3> m{0, 0, 0};
      if (dim == 2) {
        m[0] = signed_mode(int(outer));
        m[1] = j == N / 2 ? -N / 2 : j;
      } else {
        m[0] = signed_mode(int(outer / N));
        m[1] = signed_mode(int(outer % N));
        m[2] = j == N / 2 ? -N / 2 : j;
      }
      std::array<double, 3> k{}, kd{};
      bool keep = true;
      for (int a = 0; a < 3; ++a) {
        k[a] = scale * m[a];
        kd[a] = (a < dim && m[a] == -N / 2) ? 0.0 : k[a];
        if (3 * std::abs(m[a]) >= N) keep = false;
      }
      double ksq = 0.0, kdsq = 0.0, hess = 0.0;
      for (int a = 0; a < 3; ++a) {
        ksq += k[a] * k[a];
        kdsq += kd[a] * kd[a];
      }
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
          const double mult = a == b ? k[a] * k[a] : kd[a] * kd[b];
          hess += mult * mult;
        }
      }
      t->m[idx] = m;
      t->k[idx] = k;
      t->kd[idx] = kd;
      t->k_sq[idx] = ksq;
      t->kd_sq[idx] = kdsq;
      t->hess_sq[idx] = hess;
      t->weight[idx] = (j == 0 || j == N / 2) ? 1.0 : 2.0;
      t->keep[idx] = keep ? 1 : 0;
    }
  }
  return t;
}

}  // namespace

double TorusGrid::wavenumber_scale() const { return 2.0 * std::numbers::pi / L_; }

std::size_t TorusGrid::physical_size() const {
  return dim_ == 3 ? std::size_t(N_) * N_ * N_ : std::size_t(N_) * N_;
}

std::size_t TorusGrid::spectral_size() const {
  return (dim_ == 3 ? std::size_t(N_) * N_ : std::size_t(N_)) * half_points();
}

std::vector<double> TorusGrid::wavenumbers() const {
  std::vector<double> k(N_);
  for (int i = 0; i < N_; ++i) k[i] = wavenumber_scale() * mode(i);
  return k;
}

TorusGrid make_grid(double L, int N, int dim) {
  if (!(L > 0.0) || !std::isfinite(L)) {
    throw std::invalid_argument("grid: box length must be positive, got " + std::to_string(L));
  }
  if (N < 4 || N % 2 != 0) {
    throw std::invalid_argument("grid: N must be even and >= 4, got " + std::to_string(N));
  }
  if (dim != 2 && dim != 3) {
    throw std::invalid_argument("grid: dim must be 2 or 3, got " + std::to_string(dim));
  }

  static std::mutex mutex;
  static std::map<std::tuple<double, int, int>, std::shared_ptr<const detail::GridTables>> cache;

  TorusGrid grid;
  grid.L_ = L;
  grid.N_ = N;
  grid.dim_ = dim;
  std::lock_guard lock(mutex);
  auto& slot = cache[{L, N, dim}];
  if (!slot) slot = build_tables(L, N, dim);
  grid.tables_ = slot;
  return grid;
}

TorusGrid with_dim(const TorusGrid& grid, int dim) {
  return make_grid(grid.length(), grid.points(), dim);
}

}  // namespace nsstab
