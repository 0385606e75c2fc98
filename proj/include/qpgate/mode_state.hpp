#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <variant>

#include "qpgate/beam.hpp"
#include "qpgate/elements.hpp"
#include "qpgate/errors.hpp"
#include "qpgate/math_util.hpp"

namespace qpgate {

// First-order mode pair travelling along an optics line. (a, b) are the
// amplitudes of the horizontal/vertical modes; the relative Gouy phase is
// split symmetrically onto them while the common (mode-order 2) phase is
// accumulated in common_phase. The plane-wave factor e^{ikz} is excluded.
struct ModeState {
  Complex q_h{0.0, 1.0};
  Complex q_v{0.0, 1.0};
  double frame_angle = 0.0;  // orientation of the h/v principal axes in the lab
  Complex a{1.0, 0.0};
  Complex b{0.0, 0.0};
  double accum_gouy_h = 0.0;
  double accum_gouy_v = 0.0;
  double common_phase = 0.0;  // chi = accumulated gouy_h + gouy_v
};

inline ModeState make_mode_state(Complex q_h, Complex q_v, Complex a, Complex b) {
  require_physical_q(q_h, "make_mode_state");
  require_physical_q(q_v, "make_mode_state");
  const double norm = std::norm(a) + std::norm(b);
  if (std::abs(norm - 1.0) > 1e-12)
    throw ContractError("make_mode_state: |a|^2 + |b|^2 must be 1");
  return ModeState{q_h, q_v, 0.0, a, b, 0.0, 0.0, 0.0};
}

inline bool is_stigmatic(const ModeState& s, double rel_tol = 1e-9) {
  return std::abs(s.q_h - s.q_v) <= rel_tol * std::abs(s.q_h);
}

// arg(b/a); meaningful when both amplitudes are nonzero.
inline double relative_phase(const ModeState& s) {
  return std::arg(s.b) - std::arg(s.a);
}

inline ModeState apply_drift(ModeState s, double length) {
  if (length < 0.0) throw ContractError("apply_drift: negative drift length");
  const double gh0 = gouy_phase(s.q_h);
  const double gv0 = gouy_phase(s.q_v);
  s.q_h += length;
  s.q_v += length;
  const double dgh = gouy_phase(s.q_h) - gh0;
  const double dgv = gouy_phase(s.q_v) - gv0;
  s.accum_gouy_h += dgh;
  s.accum_gouy_v += dgv;
  s.common_phase += dgh + dgv;
  const double dphi = dgv - dgh;
  s.a *= std::polar(1.0, -0.5 * dphi);
  s.b *= std::polar(1.0, +0.5 * dphi);
  return s;
}

inline ModeState apply_round_lens(ModeState s, double f) {
  s.q_h = apply_lens(s.q_h, f);
  s.q_v = apply_lens(s.q_v, f);
  return s;
}

// f acts on the component along the quadrupole's x' axis, -f on y'.
// The axis must line up with the beam's principal axes (mod pi/2);
// general astigmatism is not modelled.
inline ModeState apply_quadrupole(ModeState s, std::optional<double> f, double axis_angle,
                                  double axis_tol = 1e-9) {
  if (!f) return s;  // switched off
  double rel = std::fmod(axis_angle - s.frame_angle, pi);
  if (rel < 0.0) rel += pi;
  if (rel < axis_tol || pi - rel < axis_tol) {
    s.q_h = apply_lens(s.q_h, *f);
    s.q_v = apply_lens(s.q_v, -*f);
  } else if (std::abs(rel - pi / 2.0) < axis_tol) {
    s.q_h = apply_lens(s.q_h, -*f);
    s.q_v = apply_lens(s.q_v, *f);
  } else {
    throw ContractError("apply_quadrupole: axis not aligned with beam principal axes");
  }
  return s;
}

// Coordinate-frame rotation; only defined for a stigmatic beam, on which it
// acts as the real rotation matrix on (a, b) and leaves q untouched.
inline ModeState apply_rotator(ModeState s, double angle, double rel_tol = 1e-9) {
  if (!is_stigmatic(s, rel_tol))
    throw ContractError("apply_rotator: beam must be stigmatic at a rotator");
  const double c = std::cos(angle), sn = std::sin(angle);
  const Complex a = s.a, b = s.b;
  s.a = c * a - sn * b;
  s.b = sn * a + c * b;
  return s;
}

inline ModeState apply_element(ModeState s, const Element& e) {
  return std::visit(
      [&](const auto& el) -> ModeState {
        using T = std::decay_t<decltype(el)>;
        if constexpr (std::is_same_v<T, Drift>) return apply_drift(std::move(s), el.length);
        else if constexpr (std::is_same_v<T, RoundLens>) return apply_round_lens(std::move(s), el.f);
        else if constexpr (std::is_same_v<T, Quadrupole>)
          return apply_quadrupole(std::move(s), el.f, el.axis_angle);
        else return apply_rotator(std::move(s), el.angle);
      },
      e);
}

inline ModeState propagate_line(ModeState s, const OpticsLine& line) {
  for (const Element& e : line) s = apply_element(std::move(s), e);
  return s;
}

}  // namespace qpgate
