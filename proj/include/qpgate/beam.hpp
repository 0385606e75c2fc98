#pragma once

#include <cmath>
#include <complex>
#include <limits>

#include "qpgate/constants.hpp"
#include "qpgate/errors.hpp"
#include "qpgate/math_util.hpp"

namespace qpgate {

// Complex beam parameter q(z) = z - z0 + i*zR. A physical beam has Im[q] > 0.

inline void require_physical_q(Complex q, const char* where) {
  if (!(q.imag() > 0.0))
    throw ContractError(std::string(where) + ": complex beam parameter needs Im[q] > 0");
}

struct BeamProperties {
  double width = 0.0;             // w, 1/e^2 amplitude radius of the Gaussian envelope
  double curvature_radius = 0.0;  // R, signed; +/-inf for a flat phase front
  double gouy = 0.0;              // gamma = arctan(Re[q]/Im[q]), in (-pi/2, pi/2)
};

inline double beam_width(Complex q, const ElectronContext& ctx) {
  require_physical_q(q, "beam_width");
  return std::sqrt(2.0 * std::norm(q) / (ctx.wavenumber_inv_m * q.imag()));
}

inline double curvature_radius(Complex q) {
  require_physical_q(q, "curvature_radius");
  if (q.real() == 0.0) return std::numeric_limits<double>::infinity();
  return std::norm(q) / q.real();
}

inline double gouy_phase(Complex q) {
  require_physical_q(q, "gouy_phase");
  return std::atan2(q.real(), q.imag());
}

inline BeamProperties beam_properties(Complex q, const ElectronContext& ctx) {
  return {beam_width(q, ctx), curvature_radius(q), gouy_phase(q)};
}

// Rayleigh range of the stigmatic beam with waist width w0.
inline double rayleigh_range(double w0, const ElectronContext& ctx) {
  return ctx.wavenumber_inv_m * w0 * w0 / 2.0;
}

// q of the beam with width w and curvature radius R (R may be +/-inf).
inline Complex q_from_width_curvature(double w, double curvature, const ElectronContext& ctx) {
  if (!(w > 0.0)) throw ContractError("q_from_width_curvature: width must be positive");
  const double re_inv = std::isinf(curvature) ? 0.0 : 1.0 / curvature;
  const Complex inv_q(re_inv, -2.0 / (ctx.wavenumber_inv_m * w * w));
  return 1.0 / inv_q;
}

inline Complex propagate(Complex q, double dz) {
  require_physical_q(q, "propagate");
  return q + dz;
}

inline Complex apply_lens(Complex q, double f) {
  require_physical_q(q, "apply_lens");
  if (f == 0.0) throw ContractError("apply_lens: focal length must be nonzero");
  return 1.0 / (1.0 / q - 1.0 / f);
}

}  // namespace qpgate
