#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

namespace nsstab::detail {

namespace {

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once per (n, dim) and never destroyed.
// FFTW_ESTIMATE keeps the chosen algorithm, and hence the bits, reproducible.
struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  std::size_t real_size = 0;
  std::size_t complex_size = 0;
};

const PlanPair& plans_for(int n, int dim) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<PlanPair>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{n, dim}];
  if (!slot) {
    slot = std::make_unique<PlanPair>();
    const int nh = n / 2 + 1;
    slot->real_size = dim == 3 ? std::size_t(n) * n * n : std::size_t(n) * n;
    slot->complex_size = (dim == 3 ? std::size_t(n) * n : std::size_t(n)) * nh;
    std::vector<double> r(slot->real_size);
    std::vector<std::complex<double>> c(slot->complex_size);
    auto* cp = reinterpret_cast<fftw_complex*>(c.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    if (dim == 3) {
      slot->forward = fftw_plan_dft_r2c_3d(n, n, n, r.data(), cp, flags);
      slot->backward = fftw_plan_dft_c2r_3d(n, n, n, cp, r.data(), flags);
    } else {
      slot->forward = fftw_plan_dft_r2c_2d(n, n, r.data(), cp, flags);
      slot->backward = fftw_plan_dft_c2r_2d(n, n, cp, r.data(), flags);
    }
  }
  return *slot;
}

}  // namespace

void fft_forward(int n, int dim, std::span<const double> in, std::span<std::complex<double>> out) {
  const auto& p = plans_for(n, dim);
  // r2c leaves its input intact, the const_cast only satisfies the C API
  fftw_execute_dft_r2c(p.forward, const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / double(p.real_size);
  for (auto& v : out) v *= scale;
}

void fft_backward(int n, int dim, std::span<const std::complex<double>> in, std::span<double> out) {
  const auto& p = plans_for(n, dim);
  thread_local std::vector<std::complex<double>> scratch;
  scratch.assign(in.begin(), in.end());
  fftw_execute_dft_c2r(p.backward, reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
}

}  // namespace nsstab::detail
