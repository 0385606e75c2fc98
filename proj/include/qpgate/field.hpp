#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "qpgate/beam.hpp"
#include "qpgate/constants.hpp"
#include "qpgate/errors.hpp"
#include "qpgate/math_util.hpp"

namespace qpgate {

// Sampled transverse wavefunction. Row-major, y is the row index; the pixel
// (iy, ix) sits at x = (ix - n/2) * pixel, y = (iy - n/2) * pixel.
struct FieldGrid {
  std::size_t n = 0;
  double extent = 0.0;  // full width, m
  double z = 0.0;       // axial position, m
  ElectronContext ctx;
  std::vector<Complex> samples;

  double pixel() const { return extent / static_cast<double>(n); }
  double coord(std::size_t i) const {
    return (static_cast<double>(i) - static_cast<double>(n) / 2.0) * pixel();
  }
  Complex& at(std::size_t iy, std::size_t ix) { return samples[iy * n + ix]; }
  const Complex& at(std::size_t iy, std::size_t ix) const { return samples[iy * n + ix]; }
};

struct GridSpec {
  std::size_t n = 1024;
  double extent = 0.0;
  double z = 0.0;
};

struct ModeIndex {
  int n = 0;
  int m = 0;
};

inline double total_power(const FieldGrid& f) {
  const double da = f.pixel() * f.pixel();
  double s = 0.0;
  for (const Complex& v : f.samples) s += std::norm(v);
  return s * da;
}

inline void normalize(FieldGrid& f) {
  const double p = total_power(f);
  if (!(p > 0.0)) throw ContractError("normalize: field has no power");
  const double s = 1.0 / std::sqrt(p);
  for (Complex& v : f.samples) v *= s;
}

namespace detail {

inline double hermite_phys(int n, double t) {
  double h0 = 1.0;
  if (n == 0) return h0;
  double h1 = 2.0 * t;
  for (int k = 2; k <= n; ++k) {
    const double h2 = 2.0 * t * h1 - 2.0 * (k - 1) * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

inline double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// One transverse factor of an HG mode: H_n(sqrt(2) x / w) exp(-i k x^2 / (2q))
// times the accumulated-phase convention e^{+i (n + 1/2) gamma}.
struct Hg1D {
  int order;
  double k;
  Complex q;
  double w;
  Complex gouy_factor;
  double norm;

  Hg1D(int n, Complex q_, const ElectronContext& ctx)
      : order(n), k(ctx.wavenumber_inv_m), q(q_) {
    require_physical_q(q_, "sample_hg");
    w = beam_width(q_, ctx);
    gouy_factor = std::polar(1.0, (order + 0.5) * gouy_phase(q_));
    norm = std::pow(2.0 / pi, 0.25) / std::sqrt(std::pow(2.0, order) * factorial(order) * w);
  }

  Complex operator()(double x) const {
    const Complex chirp = std::exp(Complex(0.0, -0.5 * k * x * x) / q);
    return norm * hermite_phys(order, std::sqrt(2.0) * x / w) * chirp * gouy_factor;
  }
};

}  // namespace detail

namespace detail {

inline FieldGrid sample_hg_unchecked(ModeIndex idx, Complex q_h, Complex q_v, double rotation,
                                     const GridSpec& spec, const ElectronContext& ctx) {
  if (idx.n < 0 || idx.m < 0 || idx.n + idx.m > 2)
    throw ContractError("sample_hg: mode order n + m must be <= 2 and non-negative");
  if (!(spec.extent > 0.0)) throw ContractError("sample_hg: extent must be positive");
  if (spec.n == 0 || (spec.n & (spec.n - 1)) != 0)
    throw ContractError("sample_hg: grid size must be a power of two");
  FieldGrid f;
  f.n = spec.n;
  f.extent = spec.extent;
  f.z = spec.z;
  f.ctx = ctx;
  f.samples.resize(spec.n * spec.n);
  const Hg1D hx(idx.n, q_h, ctx);
  const Hg1D hy(idx.m, q_v, ctx);
  const double c = std::cos(rotation), s = std::sin(rotation);
  for (std::size_t iy = 0; iy < f.n; ++iy) {
    const double y = f.coord(iy);
    for (std::size_t ix = 0; ix < f.n; ++ix) {
      const double x = f.coord(ix);
      const double xr = x * c + y * s;
      const double yr = -x * s + y * c;
      f.at(iy, ix) = hx(xr) * hy(yr);
    }
  }
  normalize(f);
  return f;
}

}  // namespace detail

// Astigmatic Hermite-Gaussian mode sampled in coordinates rotated by
// `rotation`. Orders up to n + m <= 2; the result is normalized on the grid.
inline FieldGrid sample_hg(ModeIndex idx, Complex q_h, Complex q_v, double rotation,
                           const GridSpec& spec, const ElectronContext& ctx) {
  const detail::Hg1D hx(idx.n < 0 ? 0 : idx.n, q_h, ctx);
  const detail::Hg1D hy(idx.m < 0 ? 0 : idx.m, q_v, ctx);
  const double wmax = std::max(hx.w, hy.w), wmin = std::min(hx.w, hy.w);
  const double pixel = spec.extent / static_cast<double>(spec.n);
  if (wmin < 16.0 * pixel)
    throw ValidityError("sample_hg: beam width under-resolved (< 16 pixels); "
                        "reduce extent or raise the grid size");
  if (spec.extent < 6.0 * wmax * (1.0 - 1e-9))
    throw ValidityError("sample_hg: extent below 6 beam widths; enlarge the extent");
  return detail::sample_hg_unchecked(idx, q_h, q_v, rotation, spec, ctx);
}

// a * HG10 + b * HG01 on a common stigmatic-or-astigmatic beam.
inline FieldGrid sample_state(Complex a, Complex b, Complex q_h, Complex q_v,
                              const GridSpec& spec, const ElectronContext& ctx) {
  FieldGrid f = sample_hg({1, 0}, q_h, q_v, 0.0, spec, ctx);
  const FieldGrid g = sample_hg({0, 1}, q_h, q_v, 0.0, spec, ctx);
  for (std::size_t i = 0; i < f.samples.size(); ++i)
    f.samples[i] = a * f.samples[i] + b * g.samples[i];
  normalize(f);
  return f;
}

struct OverlapResult {
  Complex a{0.0, 0.0};
  Complex b{0.0, 0.0};
  double residual_power = 0.0;
  double theta = 0.0;
  double phi = 0.0;
  double chi = 0.0;
  double fidelity = 0.0;  // vs the optional target, 0 when none given
  bool reference_valid = true;
};

// Project a field onto the first-order modes of a stigmatic reference beam.
inline OverlapResult modal_overlap(const FieldGrid& f, Complex q_ref,
                                   std::optional<std::pair<Complex, Complex>> target = {}) {
  require_physical_q(q_ref, "modal_overlap");
  // references are sampled without the resolution gates: a mismatched
  // reference shows up as residual power, which is the documented signal
  GridSpec spec{f.n, f.extent, f.z};
  const FieldGrid ref_h = detail::sample_hg_unchecked({1, 0}, q_ref, q_ref, 0.0, spec, f.ctx);
  const FieldGrid ref_v = detail::sample_hg_unchecked({0, 1}, q_ref, q_ref, 0.0, spec, f.ctx);
  const double da = f.pixel() * f.pixel();
  Complex a{0.0, 0.0}, b{0.0, 0.0};
  for (std::size_t i = 0; i < f.samples.size(); ++i) {
    a += std::conj(ref_h.samples[i]) * f.samples[i];
    b += std::conj(ref_v.samples[i]) * f.samples[i];
  }
  a *= da;
  b *= da;

  OverlapResult r;
  r.a = a;
  r.b = b;
  r.residual_power = total_power(f) - std::norm(a) - std::norm(b);
  r.reference_valid = r.residual_power <= 0.5;
  const double ma = std::abs(a), mb = std::abs(b);
  r.theta = 2.0 * std::atan2(mb, ma);
  if (ma < 1e-9) {
    r.phi = 0.0;
    r.chi = std::arg(b);
  } else if (mb < 1e-9) {
    r.phi = 0.0;
    r.chi = std::arg(a);
  } else {
    r.phi = wrap_2pi(std::arg(b) - std::arg(a));
    r.chi = std::arg(a);
  }
  if (target) {
    const Complex at = target->first, bt = target->second;
    r.fidelity = std::norm(a * std::conj(at) + b * std::conj(bt));
  }
  return r;
}

// <Lz> in units of hbar, Im Int psi* (x d/dy - y d/dx) psi dA, centered
// differences with the outermost ring excluded.
inline double oam_expectation(const FieldGrid& f) {
  const double da = f.pixel() * f.pixel();
  const double inv2d = 1.0 / (2.0 * f.pixel());
  double acc = 0.0;
  for (std::size_t iy = 1; iy + 1 < f.n; ++iy) {
    const double y = f.coord(iy);
    for (std::size_t ix = 1; ix + 1 < f.n; ++ix) {
      const double x = f.coord(ix);
      const Complex dpsi_dy = (f.at(iy + 1, ix) - f.at(iy - 1, ix)) * inv2d;
      const Complex dpsi_dx = (f.at(iy, ix + 1) - f.at(iy, ix - 1)) * inv2d;
      acc += (std::conj(f.at(iy, ix)) * (x * dpsi_dy - y * dpsi_dx)).imag();
    }
  }
  return acc * da;
}

namespace detail {

inline double catmull_rom(double p0, double p1, double p2, double p3, double t) {
  return p1 + 0.5 * t * (p2 - p0 + t * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
                                        t * (3.0 * (p1 - p2) + p3 - p0)));
}

inline Complex sample_bicubic(const FieldGrid& f, double x, double y) {
  const double gx = x / f.pixel() + static_cast<double>(f.n) / 2.0;
  const double gy = y / f.pixel() + static_cast<double>(f.n) / 2.0;
  const auto ix = static_cast<long>(std::floor(gx));
  const auto iy = static_cast<long>(std::floor(gy));
  if (ix < 1 || iy < 1 || ix + 2 >= static_cast<long>(f.n) || iy + 2 >= static_cast<long>(f.n))
    return Complex(0.0, 0.0);
  const double tx = gx - ix, ty = gy - iy;
  double rows_re[4], rows_im[4];
  for (int r = -1; r <= 2; ++r) {
    const Complex* row = f.samples.data() + (iy + r) * static_cast<long>(f.n) + (ix - 1);
    rows_re[r + 1] = catmull_rom(row[0].real(), row[1].real(), row[2].real(), row[3].real(), tx);
    rows_im[r + 1] = catmull_rom(row[0].imag(), row[1].imag(), row[2].imag(), row[3].imag(), tx);
  }
  return Complex(catmull_rom(rows_re[0], rows_re[1], rows_re[2], rows_re[3], ty),
                 catmull_rom(rows_im[0], rows_im[1], rows_im[2], rows_im[3], ty));
}

}  // namespace detail

// field'(r) = field(R(-angle) r). Quarter turns are exact index permutations;
// anything else uses bicubic resampling.
inline FieldGrid rotate_field(const FieldGrid& f, double angle) {
  FieldGrid out = f;
  const double quarter = angle / (pi / 2.0);
  const long qturns = std::lround(quarter);
  if (std::abs(quarter - static_cast<double>(qturns)) < 1e-12) {
    const long q = ((qturns % 4) + 4) % 4;
    if (q == 0) return out;
    const long n = static_cast<long>(f.n);
    for (long iy = 0; iy < n; ++iy) {
      for (long ix = 0; ix < n; ++ix) {
        // quarter-turn source indices on the half-pixel asymmetric grid
        // (coord index n/2 is 0): reflection is n - i, wrapping the single
        // off-grid edge sample periodically (negligible by the extent rule)
        long sx = ix, sy = iy;
        const auto refl = [n](long i) { return (n - i) % n; };
        if (q == 1) { sx = iy; sy = refl(ix); }
        if (q == 2) { sx = refl(ix); sy = refl(iy); }
        if (q == 3) { sx = refl(iy); sy = ix; }
        out.at(iy, ix) = f.samples[sy * f.n + sx];
      }
    }
    return out;
  }
  const double c = std::cos(angle), s = std::sin(angle);
  for (std::size_t iy = 0; iy < f.n; ++iy) {
    const double y = out.coord(iy);
    for (std::size_t ix = 0; ix < f.n; ++ix) {
      const double x = out.coord(ix);
      out.at(iy, ix) = detail::sample_bicubic(f, x * c + y * s, -x * s + y * c);
    }
  }
  return out;
}

struct FieldMoments {
  double mean_x = 0.0, mean_y = 0.0;
  double var_x = 0.0, var_y = 0.0;  // intensity-weighted second central moments
};

inline FieldMoments intensity_moments(const FieldGrid& f) {
  double p = 0.0, mx = 0.0, my = 0.0;
  for (std::size_t iy = 0; iy < f.n; ++iy)
    for (std::size_t ix = 0; ix < f.n; ++ix) {
      const double w = std::norm(f.at(iy, ix));
      p += w;
      mx += w * f.coord(ix);
      my += w * f.coord(iy);
    }
  mx /= p;
  my /= p;
  double vx = 0.0, vy = 0.0;
  for (std::size_t iy = 0; iy < f.n; ++iy)
    for (std::size_t ix = 0; ix < f.n; ++ix) {
      const double w = std::norm(f.at(iy, ix));
      const double dx = f.coord(ix) - mx, dy = f.coord(iy) - my;
      vx += w * dx * dx;
      vy += w * dy * dy;
    }
  return {mx, my, vx / p, vy / p};
}

// Gaussian width from the second moment of a fundamental beam: w = 2 sigma.
inline double measure_width_fundamental(const FieldGrid& f) {
  const FieldMoments m = intensity_moments(f);
  return 2.0 * std::sqrt(0.5 * (m.var_x + m.var_y));
}

// Wavefront curvature radius from the radial phase-gradient moment.
inline double measure_curvature(const FieldGrid& f) {
  const double inv2d = 1.0 / (2.0 * f.pixel());
  const double da = f.pixel() * f.pixel();
  double smom = 0.0, r2 = 0.0;
  for (std::size_t iy = 1; iy + 1 < f.n; ++iy) {
    const double y = f.coord(iy);
    for (std::size_t ix = 1; ix + 1 < f.n; ++ix) {
      const double x = f.coord(ix);
      const Complex dpsi_dx = (f.at(iy, ix + 1) - f.at(iy, ix - 1)) * inv2d;
      const Complex dpsi_dy = (f.at(iy + 1, ix) - f.at(iy - 1, ix)) * inv2d;
      smom += (std::conj(f.at(iy, ix)) * (x * dpsi_dx + y * dpsi_dy)).imag();
      r2 += std::norm(f.at(iy, ix)) * (x * x + y * y);
    }
  }
  smom *= da;
  r2 *= da;
  if (smom == 0.0) return std::numeric_limits<double>::infinity();
  return -f.ctx.wavenumber_inv_m * r2 / smom;
}

}  // namespace qpgate
