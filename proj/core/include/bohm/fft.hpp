#pragma once

#include <complex>
#include <cstddef>
#include <span>

#include "bohm/common.hpp"

namespace bohm::fft {

// Unnormalized in-place DFTs backed by FFTW.
//   forward:  X_k = sum_j x_j exp(-2 pi i jk/n)
//   inverse:  x_j = sum_k X_k exp(+2 pi i jk/n)
// Plans are created once per length and shared; execution is thread-safe.
void forward(std::span<cplx> data);
void inverse(std::span<cplx> data);
// Extended-precision variants (same conventions).
void forward(std::span<std::complex<long double>> data);
void inverse(std::span<std::complex<long double>> data);

// Batched transform of every line of a row-major rows x cols array along
// `axis` (0: down columns, 1: along rows). Same sign conventions.
void along_axis(std::span<cplx> data, std::size_t rows, std::size_t cols, int axis, bool inverse);

// Signed integer frequency index of bin j for an n-point transform:
// 0, 1, ..., n/2-1, -n/2, ..., -1.
constexpr long frequency_index(std::size_t j, std::size_t n) {
  return j < n / 2 ? static_cast<long>(j) : static_cast<long>(j) - static_cast<long>(n);
}

// Swap halves so that the zero-frequency bin lands at index n/2.
void shift(std::span<cplx> data);
void unshift(std::span<cplx> data);

}  // namespace bohm::fft
