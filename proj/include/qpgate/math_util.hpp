#pragma once

#include <cmath>
#include <complex>

namespace qpgate {

using Complex = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;

// Wrap an angle into (-pi, pi].
inline double wrap_pi(double a) {
  double w = std::remainder(a, 2.0 * pi);
  if (w <= -pi) w += 2.0 * pi;
  return w;
}

// Wrap an angle into [0, 2*pi).
inline double wrap_2pi(double a) {
  double w = std::fmod(a, 2.0 * pi);
  if (w < 0.0) w += 2.0 * pi;
  if (w >= 2.0 * pi) w = 0.0;
  return w;
}

inline bool approx_rel(double x, double y, double rel_tol) {
  double scale = std::max(std::abs(x), std::abs(y));
  return std::abs(x - y) <= rel_tol * std::max(scale, 1e-300);
}

}  // namespace qpgate
