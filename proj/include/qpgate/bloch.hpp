#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "qpgate/errors.hpp"
#include "qpgate/math_util.hpp"

namespace qpgate {

// Normalized two-state amplitudes: a = cos(theta/2) e^{i chi},
// b = sin(theta/2) e^{i(phi + chi)} with theta in [0, pi], phi in [0, 2pi).
struct QubitState {
  Complex a{1.0, 0.0};
  Complex b{0.0, 0.0};
};

struct StateAngles {
  double theta = 0.0;
  double phi = 0.0;
  double global_phase = 0.0;
};

inline QubitState make_qubit_state(Complex a, Complex b) {
  if (std::abs(std::norm(a) + std::norm(b) - 1.0) > 1e-12)
    throw ContractError("make_qubit_state: state must be normalized");
  return QubitState{a, b};
}

inline QubitState state_from_angles(double theta, double phi) {
  if (theta < -1e-12 || theta > pi + 1e-12)
    throw ContractError("state_from_angles: theta must lie in [0, pi]");
  if (phi < -1e-12 || phi >= 2.0 * pi + 1e-12)
    throw ContractError("state_from_angles: phi must lie in [0, 2pi)");
  return QubitState{Complex(std::cos(theta / 2.0), 0.0),
                    std::polar(std::sin(theta / 2.0), phi)};
}

// phi is canonicalized to 0 at the poles; the global phase is taken from the
// dominant amplitude.
inline StateAngles angles_from_state(const QubitState& s) {
  StateAngles out;
  const double ma = std::abs(s.a), mb = std::abs(s.b);
  out.theta = 2.0 * std::atan2(mb, ma);
  if (ma < 1e-12) {
    out.phi = 0.0;
    out.global_phase = std::arg(s.b);
  } else if (mb < 1e-12) {
    out.phi = 0.0;
    out.global_phase = std::arg(s.a);
  } else {
    out.phi = wrap_2pi(std::arg(s.b) - std::arg(s.a));
    out.global_phase = std::arg(s.a);
  }
  return out;
}

inline std::array<double, 3> bloch_vector(const QubitState& s) {
  const Complex ab = std::conj(s.a) * s.b;
  return {2.0 * ab.real(), 2.0 * ab.imag(), std::norm(s.a) - std::norm(s.b)};
}

// Row-major 2x2 complex matrix.
struct Unitary2 {
  std::array<Complex, 4> m{Complex(1, 0), Complex(0, 0), Complex(0, 0), Complex(1, 0)};
  Complex operator()(int r, int c) const { return m[2 * r + c]; }
  Complex& operator()(int r, int c) { return m[2 * r + c]; }
};

inline Unitary2 operator*(const Unitary2& x, const Unitary2& y) {
  Unitary2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      r(i, j) = x(i, 0) * y(0, j) + x(i, 1) * y(1, j);
  return r;
}

inline Unitary2 operator*(Complex c, const Unitary2& u) {
  Unitary2 r = u;
  for (auto& e : r.m) e *= c;
  return r;
}

inline double frobenius_distance(const Unitary2& x, const Unitary2& y) {
  double s = 0.0;
  for (int i = 0; i < 4; ++i) s += std::norm(x.m[i] - y.m[i]);
  return std::sqrt(s);
}

inline Unitary2 adjoint(const Unitary2& u) {
  Unitary2 r;
  r(0, 0) = std::conj(u(0, 0));
  r(0, 1) = std::conj(u(1, 0));
  r(1, 0) = std::conj(u(0, 1));
  r(1, 1) = std::conj(u(1, 1));
  return r;
}

inline bool is_unitary(const Unitary2& u, double tol = 1e-10) {
  return frobenius_distance(u * adjoint(u), Unitary2{}) <= tol;
}

// Spin-half convention: Rx(t) = exp(-i t sx/2), Rz(t) = exp(-i t sz/2), so a
// physical frame rotation by t/2 corresponds to Rx(t).
inline Unitary2 rx(double t) {
  Unitary2 u;
  const double c = std::cos(t / 2.0), s = std::sin(t / 2.0);
  u(0, 0) = Complex(c, 0);
  u(0, 1) = Complex(0, -s);
  u(1, 0) = Complex(0, -s);
  u(1, 1) = Complex(c, 0);
  return u;
}

inline Unitary2 rz(double t) {
  Unitary2 u;
  u(0, 0) = std::polar(1.0, -t / 2.0);
  u(0, 1) = Complex(0, 0);
  u(1, 0) = Complex(0, 0);
  u(1, 1) = std::polar(1.0, t / 2.0);
  return u;
}

inline QubitState apply_unitary(const Unitary2& u, const QubitState& psi, double tol = 1e-8) {
  if (!is_unitary(u, tol)) throw ContractError("apply_unitary: matrix is not unitary");
  return QubitState{u(0, 0) * psi.a + u(0, 1) * psi.b, u(1, 0) * psi.a + u(1, 1) * psi.b};
}

// U = e^{i chi} Rx(alpha2) Rz(beta) Rx(alpha1), reconstructed exactly
// (including the global phase). alpha1, alpha2 in [0, 2pi), beta in [0, pi].
struct EulerXZX {
  double alpha1 = 0.0;
  double beta = 0.0;
  double alpha2 = 0.0;
  double global_phase = 0.0;
};

namespace detail {

// Wrap into [0, 2pi); Rx flips sign per full turn removed, so report whether
// an odd number of turns was folded away.
inline double wrap_2pi_track_flip(double x, bool& flip) {
  double y = wrap_2pi(x);
  const double periods = std::round((x - y) / (2.0 * pi));
  if (std::fmod(std::abs(periods), 2.0) == 1.0) flip = !flip;
  return y;
}

}  // namespace detail

inline EulerXZX euler_xzx_decompose(const Unitary2& u, double tol = 1e-8) {
  if (!is_unitary(u, tol)) throw ContractError("euler_xzx_decompose: matrix is not unitary");
  const Complex det = u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0);
  double chi = 0.5 * std::arg(det);
  const Complex v00 = u(0, 0) * std::polar(1.0, -chi);
  const Complex v01 = u(0, 1) * std::polar(1.0, -chi);
  // SU(2) row: v00 = cos(S)cos(b/2) - i cos(D)sin(b/2),
  //            v01 = sin(D)sin(b/2) - i sin(S)cos(b/2),
  // with S = (a1+a2)/2, D = (a2-a1)/2.
  const double cb = std::hypot(v00.real(), v01.imag());
  const double sb = std::hypot(v00.imag(), v01.real());
  const double beta = 2.0 * std::atan2(sb, cb);
  double sum = 0.0, diff = 0.0;
  if (cb > 1e-14) sum = std::atan2(-v01.imag(), v00.real());
  if (sb > 1e-14) diff = std::atan2(v01.real(), -v00.imag());
  else diff = -sum;  // gimbal: pure x-rotation, canonicalized to alpha2 = 0
  bool flip = false;
  EulerXZX e;
  e.alpha1 = detail::wrap_2pi_track_flip(sum - diff, flip);
  e.alpha2 = detail::wrap_2pi_track_flip(sum + diff, flip);
  e.beta = beta;
  if (flip) chi = wrap_pi(chi + pi);
  e.global_phase = chi;
  return e;
}

inline Unitary2 euler_xzx_reconstruct(const EulerXZX& e) {
  return std::polar(1.0, e.global_phase) * (rx(e.alpha2) * (rz(e.beta) * rx(e.alpha1)));
}

}  // namespace qpgate
