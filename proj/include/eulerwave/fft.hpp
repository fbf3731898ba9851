#pragma once

// Iterative radix-2 FFT for power-of-two lengths, applied along the axes of
// small dense multi-dimensional grids. Sizes here stay tiny (N <= 512), so a
// plan-free textbook transform is all the torus experiments need.

#include <complex>
#include <vector>

#include "eulerwave/common.hpp"

namespace eulerwave {

using cplx = std::complex<double>;

// In-place transform of a strided sequence a[offset + k*stride], k = 0..n-1.
// sign = -1 forward, +1 inverse (inverse includes the 1/n factor).
inline void fft_strided(std::vector<cplx>& a, std::size_t offset, std::size_t stride,
                        std::size_t n, int sign) {
  if (!is_pow2(static_cast<int>(n))) throw config_error("fft: length must be a power of two");
  auto at = [&](std::size_t k) -> cplx& { return a[offset + k * stride]; };
  // bit-reversal permutation
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(at(i), at(j));
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * kPi / static_cast<double>(len);
    const cplx wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      cplx w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        cplx u = at(i + k);
        cplx v = at(i + k + len / 2) * w;
        at(i + k) = u + v;
        at(i + k + len / 2) = u - v;
        w *= wl;
      }
    }
  }
  if (sign > 0) {
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) at(k) *= inv;
  }
}

// Full transform of a dims-dimensional N^dims grid stored row-major
// (last axis fastest).
inline void fft_nd(std::vector<cplx>& a, int dims, std::size_t N, int sign) {
  std::size_t total = 1;
  for (int d = 0; d < dims; ++d) total *= N;
  if (a.size() != total) throw config_error("fft_nd: size mismatch");
  std::size_t stride = 1;
  for (int axis = dims - 1; axis >= 0; --axis) {
    const std::size_t lines = total / N;
    std::vector<std::size_t> offsets;
    offsets.reserve(lines);
    // enumerate line start offsets: all indices with axis coordinate zero
    for (std::size_t idx = 0; idx < total; ++idx) {
      if ((idx / stride) % N == 0) offsets.push_back(idx);
    }
    parallel_for(offsets.size(),
                 [&](std::size_t i) { fft_strided(a, offsets[i], stride, N, sign); });
    stride *= N;
  }
}

// Signed integer frequency for index k on a length-N axis.
inline int freq_of_index(std::size_t k, std::size_t N) {
  return (k <= N / 2) ? static_cast<int>(k) : static_cast<int>(k) - static_cast<int>(N);
}

}  // namespace eulerwave
