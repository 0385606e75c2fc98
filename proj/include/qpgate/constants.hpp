#pragma once

#include <cmath>

#include "qpgate/errors.hpp"
#include "qpgate/math_util.hpp"

namespace qpgate {

// SI defining constants (2019 revision) and CODATA electron rest energy.
inline constexpr double planck_J_s = 6.62607015e-34;
inline constexpr double light_speed_m_s = 299792458.0;
inline constexpr double joule_per_keV = 1.602176634e-16;
inline constexpr double electron_rest_energy_keV = 510.99895000;

// Beam constants for a monochromatic electron beam of given kinetic energy.
struct ElectronContext {
  double kinetic_energy_kev = 0.0;
  double wavelength_m = 0.0;
  double wavenumber_inv_m = 0.0;  // k = 2*pi / lambda
};

// Relativistic de Broglie wavelength: lambda = h*c / sqrt(E*(E + 2*m0c^2)).
inline ElectronContext electron_context(double kinetic_energy_kev) {
  if (!(kinetic_energy_kev > 0.0))
    throw ContractError("electron_context: kinetic energy must be positive");
  const double e_j = kinetic_energy_kev * joule_per_keV;
  const double rest_j = electron_rest_energy_keV * joule_per_keV;
  const double pc = std::sqrt(e_j * (e_j + 2.0 * rest_j));
  ElectronContext ctx;
  ctx.kinetic_energy_kev = kinetic_energy_kev;
  ctx.wavelength_m = planck_J_s * light_speed_m_s / pc;
  ctx.wavenumber_inv_m = 2.0 * pi / ctx.wavelength_m;
  return ctx;
}

}  // namespace qpgate
