#pragma once

#include <complex>
#include <span>
#include <vector>

namespace hsw {

using cplx = std::complex<double>;

// Discrete Fourier transform pair backed by FFTW.
//   forward:  X_k = (1/n) sum_j x_j exp(-2 pi i j k / n)
//   inverse:  x_j =       sum_k X_k exp(+2 pi i j k / n)
std::vector<cplx> fft_forward(std::span<const cplx> x);
std::vector<cplx> fft_inverse(std::span<const cplx> X);
std::vector<cplx> fft_forward_real(std::span<const double> x);

// Signed integer frequency index of bin k for an n-point transform.
inline long fft_index(std::size_t k, std::size_t n) {
  return k < (n + 1) / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
}

}  // namespace hsw
