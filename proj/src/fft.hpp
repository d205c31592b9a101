#pragma once

#include <complex>
#include <span>

namespace nsstab::detail {

/// Normalized real-to-complex transform on an N^dim grid: out = FFT(in) / N^dim.
void fft_forward(int n, int dim, std::span<const double> in, std::span<std::complex<double>> out);

/// Complex-to-real synthesis f(x) = Σ f̂_k e^{ik·x}; the input is not modified.
void fft_backward(int n, int dim, std::span<const std::complex<double>> in, std::span<double> out);

}  // namespace nsstab::detail
