#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <variant>

#include "qpgate/elements.hpp"
#include "qpgate/errors.hpp"
#include "qpgate/fft.hpp"
#include "qpgate/field.hpp"
#include "qpgate/math_util.hpp"

namespace qpgate {

namespace detail {

// Fraction of the power in the outermost two-pixel frame. Light there either
// clips or wraps around under the periodic transform.
inline double edge_ring_power_fraction(const std::vector<Complex>& s, std::size_t n) {
  double edge = 0.0, tot = 0.0;
  for (std::size_t iy = 0; iy < n; ++iy)
    for (std::size_t ix = 0; ix < n; ++ix) {
      const double w = std::norm(s[iy * n + ix]);
      tot += w;
      if (iy < 2 || ix < 2 || iy + 2 >= n || ix + 2 >= n) edge += w;
    }
  return tot > 0.0 ? edge / tot : 0.0;
}

inline double grid_freq(std::size_t j, std::size_t n, double pixel) {
  const auto sj = static_cast<long>(j);
  const long half = static_cast<long>(n) / 2;
  const long wrapped = sj >= half ? sj - static_cast<long>(n) : sj;
  return 2.0 * pi * static_cast<double>(wrapped) / (static_cast<double>(n) * pixel);
}

// Power fraction within two bins of the Nyquist frequency (indices wrap, so
// the band edge sits at the middle of the index range).
inline double nyquist_ring_power_fraction(const std::vector<Complex>& s, std::size_t n) {
  const auto near_edge = [n](std::size_t j) {
    const std::size_t wrapped = j >= n / 2 ? n - j : j;
    return wrapped + 2 >= n / 2;
  };
  double edge = 0.0, tot = 0.0;
  for (std::size_t iy = 0; iy < n; ++iy)
    for (std::size_t ix = 0; ix < n; ++ix) {
      const double w = std::norm(s[iy * n + ix]);
      tot += w;
      if (near_edge(ix) || near_edge(iy)) edge += w;
    }
  return tot > 0.0 ? edge / tot : 0.0;
}

}  // namespace detail

// Paraxial transfer-function step: psi(k) *= exp(+i dz k_perp^2 / (2 k0)).
// The plane-wave factor e^{i k0 dz} is excluded and tracked analytically.
inline void fresnel_propagate(FieldGrid& f, double dz) {
  if (dz == 0.0) return;
  if (detail::edge_ring_power_fraction(f.samples, f.n) > 1e-6)
    throw ValidityError("fresnel_propagate: field touches the grid edge; enlarge the extent");
  fft::fft2_inplace(f.samples, f.n, false);
  if (detail::nyquist_ring_power_fraction(f.samples, f.n) > 1e-6)
    throw ValidityError("fresnel_propagate: spectrum touches the band edge; raise the grid "
                        "size or enlarge the extent");
  const double k0 = f.ctx.wavenumber_inv_m;
  const double px = f.pixel();
  for (std::size_t iy = 0; iy < f.n; ++iy) {
    const double ky = detail::grid_freq(iy, f.n, px);
    for (std::size_t ix = 0; ix < f.n; ++ix) {
      const double kx = detail::grid_freq(ix, f.n, px);
      f.at(iy, ix) *= std::polar(1.0, 0.5 * dz * (kx * kx + ky * ky) / k0);
    }
  }
  fft::fft2_inplace(f.samples, f.n, true);
  f.z += dz;
}

// Thin-element quadratic phase exp(+i k (x'^2/f_x + y'^2/f_y) / 2) in axes
// rotated by axis_angle. An unset focal length leaves that axis untouched.
inline void apply_phase_mask(FieldGrid& f, std::optional<double> f_x, std::optional<double> f_y,
                             double axis_angle) {
  if (!f_x && !f_y) return;
  const double k0 = f.ctx.wavenumber_inv_m;
  const double inv_fx = f_x ? 1.0 / *f_x : 0.0;
  const double inv_fy = f_y ? 1.0 / *f_y : 0.0;
  if ((f_x && *f_x == 0.0) || (f_y && *f_y == 0.0))
    throw ContractError("apply_phase_mask: focal length must be nonzero");
  // mask phase step per pixel at the grid edge must stay below pi
  const double max_inv_f = std::max(std::abs(inv_fx), std::abs(inv_fy));
  const double edge_step = k0 * (f.extent / 2.0) * f.pixel() * max_inv_f;
  if (edge_step >= pi)
    throw ValidityError("apply_phase_mask: mask phase under-sampled at the grid edge; "
                        "raise the grid size or shorten the focal length path");
  const double c = std::cos(axis_angle), s = std::sin(axis_angle);
  for (std::size_t iy = 0; iy < f.n; ++iy) {
    const double y = f.coord(iy);
    for (std::size_t ix = 0; ix < f.n; ++ix) {
      const double x = f.coord(ix);
      const double xr = x * c + y * s;
      const double yr = -x * s + y * c;
      f.at(iy, ix) *= std::polar(1.0, 0.5 * k0 * (xr * xr * inv_fx + yr * yr * inv_fy));
    }
  }
}

struct RunOptions {
  // Focal length standing in for a switched-off quadrupole (the 1 km
  // surrogate); off elements are skipped when unset.
  std::optional<double> off_surrogate_f;
  // Called after every element with the current field.
  std::function<void(const FieldGrid&, std::size_t element_index)> on_element;
};

// Wave-level walk of an optics line: drifts via the Fresnel transform,
// lenses and quadrupoles as phase masks, rotators by resampling.
inline FieldGrid run_line(FieldGrid f, const OpticsLine& line, const RunOptions& opt = {}) {
  for (std::size_t i = 0; i < line.size(); ++i) {
    std::visit(
        [&](const auto& el) {
          using T = std::decay_t<decltype(el)>;
          if constexpr (std::is_same_v<T, Drift>) {
            fresnel_propagate(f, el.length);
          } else if constexpr (std::is_same_v<T, RoundLens>) {
            apply_phase_mask(f, el.f, el.f, 0.0);
          } else if constexpr (std::is_same_v<T, Quadrupole>) {
            if (el.f) apply_phase_mask(f, *el.f, -*el.f, el.axis_angle);
            else if (opt.off_surrogate_f)
              apply_phase_mask(f, *opt.off_surrogate_f, -*opt.off_surrogate_f, el.axis_angle);
          } else {
            f = rotate_field(f, el.angle);
          }
        },
        line[i]);
    if (opt.on_element) opt.on_element(f, i);
  }
  return f;
}

}  // namespace qpgate
