#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "qpgate/errors.hpp"
#include "qpgate/math_util.hpp"

namespace qpgate::fft {

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Iterative radix-2 plan: bit-reversal table plus per-stage twiddles.
struct Plan {
  std::size_t n = 0;
  std::vector<std::size_t> bitrev;
  std::vector<Complex> twiddle;  // exp(-2*pi*i*j/n), j < n/2

  explicit Plan(std::size_t size) : n(size) {
    if (!is_power_of_two(n)) throw ContractError("fft: size must be a power of two");
    bitrev.resize(n);
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (std::size_t b = 0; b < bits; ++b) r |= ((i >> b) & 1u) << (bits - 1 - b);
      bitrev[i] = r;
    }
    twiddle.resize(n / 2);
    for (std::size_t j = 0; j < n / 2; ++j)
      twiddle[j] = std::polar(1.0, -2.0 * pi * static_cast<double>(j) / static_cast<double>(n));
  }

  // Unnormalized transform of one contiguous row.
  void run(Complex* a, bool inverse) const {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = bitrev[i];
      if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
      const std::size_t half = len >> 1;
      const std::size_t step = n / len;
      for (std::size_t base = 0; base < n; base += len) {
        for (std::size_t k = 0; k < half; ++k) {
          Complex w = twiddle[k * step];
          if (inverse) w = std::conj(w);
          const Complex t = a[base + k + half] * w;
          a[base + k + half] = a[base + k] - t;
          a[base + k] += t;
        }
      }
    }
  }
};

// In-place unitary 2D FFT of an n x n row-major array (scaled by 1/n per
// direction, so forward followed by inverse is the identity and Parseval
// holds without extra factors).
inline void fft2_inplace(std::vector<Complex>& data, std::size_t n, bool inverse) {
  if (data.size() != n * n) throw ContractError("fft2: data size mismatch");
  const Plan plan(n);
  for (std::size_t r = 0; r < n; ++r) plan.run(data.data() + r * n, inverse);
  // transpose, transform rows (former columns), transpose back
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = r + 1; c < n; ++c) std::swap(data[r * n + c], data[c * n + r]);
  for (std::size_t r = 0; r < n; ++r) plan.run(data.data() + r * n, inverse);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = r + 1; c < n; ++c) std::swap(data[r * n + c], data[c * n + r]);
  const double scale = 1.0 / static_cast<double>(n);
  for (Complex& v : data) v *= scale;
}

}  // namespace qpgate::fft
