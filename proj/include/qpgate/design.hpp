#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qpgate/beam.hpp"
#include "qpgate/elements.hpp"
#include "qpgate/errors.hpp"
#include "qpgate/math_util.hpp"
#include "qpgate/mode_state.hpp"

namespace qpgate {

enum class DesignMode { normal, qps_off, line_focus, chained };

// Round-lens link joining two chained stages whose beam interfaces differ.
// f_b is absent when a single lens (drift = 0) suffices.
struct Relay {
  double f_a = 0.0;
  double drift = 0.0;
  std::optional<double> f_b;
};

// Two-quadrupole relative phase shifter: spacing d, target phase delta_phi,
// astigmatism parameter u = sign(f1)*sqrt(f1*f2/d^2 - 1), focal lengths, and
// the matched entrance/exit beam parameters.
struct PhaseShifterDesign {
  DesignMode mode = DesignMode::normal;
  double d = 0.0;
  double delta_phi = 0.0;
  double u = 0.0;
  std::optional<double> f1;
  std::optional<double> f2;
  Complex q_in{0.0, 1.0};
  Complex q_out{0.0, 1.0};
  std::optional<double> w_geom;  // incident beam width for the geometric edge modes
  std::vector<PhaseShifterDesign> stages;        // chained only
  std::vector<std::optional<Relay>> relays;      // chained only, stages.size()-1 entries
  std::vector<std::string> warnings;
};

// Relative phase of the matched two-quadrupole line. Solves
// tan(delta_phi) = 2u/(1 - u^2) on the branch the propagation actually
// realizes: delta_phi = -atan2(2u, u^2 - 1) = -2*arctan(1/u). The branch is
// pinned by the edge cases (u -> inf: quadrupoles off, delta_phi -> 0;
// u -> 0: f1 = f2 = -d line focus, delta_phi -> pi) and by numerical wave
// propagation.
inline double phase_from_u(double u) {
  if (!std::isfinite(u)) throw ContractError("phase_from_u: u must be finite");
  return wrap_pi(-std::atan2(2.0 * u, u * u - 1.0));
}

// Inverse of phase_from_u on (-pi, pi) \ {0}; closed form u = -cot(delta_phi/2).
inline double u_from_phase(double delta_phi) {
  const double p = wrap_pi(delta_phi);
  if (p == 0.0)
    throw ContractError("u_from_phase: delta_phi = 0 needs infinite focal lengths; "
                        "use the quadrupoles-off edge design");
  if (std::abs(p) == pi)
    throw ContractError("u_from_phase: delta_phi = pi is the u = 0 degeneracy with an "
                        "unphysical real q_in; use the line-focus edge design or a chain");
  return -1.0 / std::tan(0.5 * p);
}

struct FreeSymmetric {};                           // f1 = f2
struct FreeF1 { double f1 = 0.0; };                // f1 given, sign must match u
struct FreeInputRayleigh { double rayleigh_range = 0.0; };  // Im[q_in] given
using FreeParameter = std::variant<FreeSymmetric, FreeF1, FreeInputRayleigh>;

namespace detail {

// q_in of the mode-matched incident beam for quadrupoles f1, f2 = d^2(1+u^2)/f1.
inline Complex matched_q_in(double d, double f1, double u) {
  const double denom = f1 * f1 + d * d * u * u;
  return Complex(-d * f1 * f1, d * d * f1 * u) / denom;
}

inline double rayleigh_of_f1(double d, double f1, double u) {
  return matched_q_in(d, f1, u).imag();
}

}  // namespace detail

// The three-element line realizing a design (entrance of QP1 to exit of QP2).
inline OpticsLine design_line(const PhaseShifterDesign& dsg) {
  OpticsLine line;
  switch (dsg.mode) {
    case DesignMode::normal:
    case DesignMode::line_focus:
      line.push_back(Quadrupole{dsg.f1, 0.0});
      line.push_back(Drift{dsg.d});
      line.push_back(Quadrupole{dsg.f2, 0.0});
      break;
    case DesignMode::qps_off:
      line.push_back(Quadrupole{std::nullopt, 0.0});
      line.push_back(Drift{dsg.d});
      line.push_back(Quadrupole{std::nullopt, 0.0});
      break;
    case DesignMode::chained:
      for (std::size_t i = 0; i < dsg.stages.size(); ++i) {
        OpticsLine sub = design_line(dsg.stages[i]);
        line.insert(line.end(), sub.begin(), sub.end());
        if (i + 1 < dsg.stages.size() && dsg.relays[i]) {
          const Relay& r = *dsg.relays[i];
          line.push_back(RoundLens{r.f_a});
          if (r.drift > 0.0) line.push_back(Drift{r.drift});
          if (r.f_b) line.push_back(RoundLens{*r.f_b});
        }
      }
      break;
  }
  return line;
}

namespace detail {

inline Complex propagate_q_pair(const PhaseShifterDesign& dsg, Complex* q_h_out = nullptr,
                                Complex* q_v_out = nullptr) {
  ModeState s = make_mode_state(dsg.q_in, dsg.q_in, Complex(1.0 / std::sqrt(2.0), 0.0),
                                Complex(1.0 / std::sqrt(2.0), 0.0));
  s = propagate_line(std::move(s), design_line(dsg));
  if (q_h_out) *q_h_out = s.q_h;
  if (q_v_out) *q_v_out = s.q_v;
  // Exit beam parameter; for the geometric-limit modes the residual
  // astigmatism is averaged on 1/q, which keeps the (exact) width match.
  return 2.0 / (1.0 / s.q_h + 1.0 / s.q_v);
}

}  // namespace detail

// Solve the mode-matching problem for given spacing and phase. The remaining
// degree of freedom picks f1 directly, a symmetric setup (f1 = f2), or the
// incident Rayleigh range.
inline PhaseShifterDesign design(double d, double delta_phi, const FreeParameter& free) {
  if (!(d > 0.0)) throw ContractError("design: spacing d must be positive");
  const double p = wrap_pi(delta_phi);
  if (p == 0.0 || std::abs(p) == pi)
    throw ContractError("design: delta_phi in {0, pi} needs design_edge or a chain");

  PhaseShifterDesign dsg;
  dsg.mode = DesignMode::normal;
  dsg.d = d;
  dsg.delta_phi = p;
  dsg.u = u_from_phase(p);
  if (pi - std::abs(p) < 1e-6)
    dsg.warnings.push_back("delta_phi close to pi: the design becomes extreme "
                           "(Im[q_in] -> 0); consider design_edge or chaining");
  else if (std::abs(p) < 1e-6)
    dsg.warnings.push_back("delta_phi close to 0: the design becomes extreme "
                           "(focal lengths diverge); consider design_edge or chaining");

  const double u = dsg.u;
  double f1 = 0.0;
  if (std::holds_alternative<FreeSymmetric>(free)) {
    f1 = std::copysign(d * std::sqrt(1.0 + u * u), u);
  } else if (const auto* ff = std::get_if<FreeF1>(&free)) {
    f1 = ff->f1;
    if (f1 == 0.0 || std::signbit(f1) != std::signbit(u))
      throw ContractError("design: f1 must be nonzero with sign(f1) = sign(u)");
  } else {
    const double zr = std::get<FreeInputRayleigh>(free).rayleigh_range;
    if (!(zr > 0.0)) throw ContractError("design: Rayleigh range must be positive");
    // Im[q_in] as a function of |f1| peaks at d/2 when |f1| = d|u| and falls
    // monotonically on the weak-lens branch |f1| in [d|u|, 1e3*d].
    const double s = u < 0.0 ? -1.0 : 1.0;
    double lo = d * std::abs(u), hi = 1e3 * d;
    const double zr_max = detail::rayleigh_of_f1(d, s * lo, u);
    const double zr_min = detail::rayleigh_of_f1(d, s * hi, u);
    if (zr > zr_max * (1.0 + 1e-12) || zr < zr_min)
      throw ValidityError("design: requested input Rayleigh range outside the attainable "
                          "range for this d and delta_phi");
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (detail::rayleigh_of_f1(d, s * mid, u) >= zr) lo = mid; else hi = mid;
      if ((hi - lo) <= 1e-14 * hi) break;
    }
    f1 = s * 0.5 * (lo + hi);
  }

  dsg.f1 = f1;
  dsg.f2 = d * d * (1.0 + u * u) / f1;
  dsg.q_in = detail::matched_q_in(d, f1, u);
  if (!(dsg.q_in.imag() > 0.0))
    throw ContractError("design: resulting q_in is unphysical (Im <= 0)");
  dsg.q_out = detail::propagate_q_pair(dsg);
  return dsg;
}

// Geometric-limit designs for delta_phi = 0 (both quadrupoles off, incident
// focus at d/2) and delta_phi = pi (f1 = f2 = -d, horizontal line focus).
inline PhaseShifterDesign design_edge(const ElectronContext& ctx, double d, double delta_phi,
                                      double w_geom) {
  if (!(d > 0.0)) throw ContractError("design_edge: spacing d must be positive");
  if (!(w_geom > 0.0)) throw ContractError("design_edge: w_geom must be positive");
  const double p = wrap_pi(delta_phi);
  PhaseShifterDesign dsg;
  dsg.d = d;
  dsg.w_geom = w_geom;
  if (std::abs(p) < 1e-12) {
    dsg.mode = DesignMode::qps_off;
    dsg.delta_phi = 0.0;
    dsg.q_in = q_from_width_curvature(w_geom, -d / 2.0, ctx);
  } else if (std::abs(std::abs(p) - pi) < 1e-12) {
    dsg.mode = DesignMode::line_focus;
    dsg.delta_phi = pi;
    dsg.f1 = -d;
    dsg.f2 = -d;
    dsg.q_in = q_from_width_curvature(w_geom, -d, ctx);
  } else {
    throw ContractError("design_edge: only delta_phi of 0 or pi is an edge case");
  }
  // The geometric limit needs Im[q_in] << d; flag marginal beams.
  if (dsg.q_in.imag() > 0.05 * d)
    dsg.warnings.push_back("w_geom is small for the geometric limit (Rayleigh range above "
                           "5% of d); expect a degraded phase");
  dsg.q_out = detail::propagate_q_pair(dsg);
  return dsg;
}

enum class RelayPolicy { reject, auto_insert };

namespace detail {

// Round-lens relay mapping q_from onto q_to. A single lens covers matching
// widths; otherwise lens-drift-lens with a waist-based intermediate.
inline Relay make_relay(Complex q_from, Complex q_to) {
  const Complex inv_from = 1.0 / q_from, inv_to = 1.0 / q_to;
  Relay r;
  if (std::abs(inv_from.imag() - inv_to.imag()) <=
      1e-12 * std::abs(inv_from.imag())) {  // equal widths
    r.f_a = 1.0 / (inv_from.real() - inv_to.real());
    r.drift = 0.0;
    return r;
  }
  // Width must change: travel via a waist. zr_w = k w^2 / 2 stands in for the
  // width on either side.
  const double zr_from = std::norm(q_from) / q_from.imag();
  const double zr_to = std::norm(q_to) / q_to.imag();
  Complex q_a;  // beam right after the first lens
  double drift = 0.0;
  if (zr_to > zr_from) {
    // widen: waist at the first lens, drift until the width matches
    drift = std::sqrt(zr_from * (zr_to - zr_from));
    q_a = Complex(0.0, zr_from);
  } else {
    // narrow: converge onto a waist of the target width
    drift = std::sqrt(zr_to * (zr_from - zr_to));
    q_a = Complex(-drift, zr_to);
  }
  r.f_a = 1.0 / (inv_from.real() - (1.0 / q_a).real());
  r.drift = drift;
  const Complex q_b = q_a + drift;
  const double inv_fb = (1.0 / q_b).real() - inv_to.real();
  if (std::abs(inv_fb) > 1e-15) r.f_b = 1.0 / inv_fb;
  return r;
}

}  // namespace detail

// Concatenate phase shifters; the total phase is the wrapped sum. Stage
// interfaces must match, or (opt-in) relays are inserted between stages.
inline PhaseShifterDesign chain(std::vector<PhaseShifterDesign> stages,
                                RelayPolicy policy = RelayPolicy::reject) {
  if (stages.empty()) throw ContractError("chain: needs at least one stage");
  if (stages.size() == 1) return stages.front();
  PhaseShifterDesign dsg;
  dsg.mode = DesignMode::chained;
  dsg.d = stages.front().d;
  dsg.q_in = stages.front().q_in;
  double total = 0.0;
  for (std::size_t i = 0; i < stages.size(); ++i) {
    total += stages[i].delta_phi;
    if (i + 1 < stages.size()) {
      const Complex q_out = stages[i].q_out, q_next = stages[i + 1].q_in;
      if (std::abs(q_out - q_next) <= 1e-9 * std::abs(q_out)) {
        dsg.relays.push_back(std::nullopt);
      } else if (policy == RelayPolicy::auto_insert) {
        dsg.relays.push_back(detail::make_relay(q_out, q_next));
      } else {
        throw ContractError("chain: stage interfaces do not match; enable relay insertion "
                            "or redesign the stages");
      }
    }
  }
  dsg.delta_phi = wrap_pi(total);
  dsg.stages = std::move(stages);
  dsg.q_out = detail::propagate_q_pair(dsg);
  return dsg;
}

struct VerifyReport {
  double mode_match_residual = 0.0;     // |q_h - q_v| / |q_h| at QP2 exit
  double achieved_phase = 0.0;          // from analytic propagation, wrapped
  double phase_residual = 0.0;          // |achieved - target| (wrapped)
  std::optional<double> curvature_residual;  // |R(q_in) + d| / d, normal/chained only
  double w_in = 0.0;
  double w_out = 0.0;
  bool pass = false;
};

// Check a design by analytic propagation. Normal, off and chained designs are
// held to 1e-9 residuals; the line-focus mode is a geometric-limit device and
// is held to its documented coarse thresholds instead.
inline VerifyReport verify(const ElectronContext& ctx, const PhaseShifterDesign& dsg) {
  VerifyReport rep;
  Complex q_h, q_v;
  ModeState in = make_mode_state(dsg.q_in, dsg.q_in, Complex(1.0 / std::sqrt(2.0), 0.0),
                                 Complex(1.0 / std::sqrt(2.0), 0.0));
  ModeState out = propagate_line(in, design_line(dsg));
  q_h = out.q_h;
  q_v = out.q_v;
  rep.mode_match_residual = std::abs(q_h - q_v) / std::abs(q_h);
  rep.achieved_phase = wrap_pi(relative_phase(out) - relative_phase(in));
  rep.phase_residual = std::abs(wrap_pi(rep.achieved_phase - dsg.delta_phi));
  rep.w_in = beam_width(dsg.q_in, ctx);
  rep.w_out = beam_width(dsg.q_out, ctx);
  const double first_d = dsg.mode == DesignMode::chained ? dsg.stages.front().d : dsg.d;
  if (dsg.mode == DesignMode::normal ||
      (dsg.mode == DesignMode::chained && !dsg.stages.empty() &&
       dsg.stages.front().mode == DesignMode::normal)) {
    rep.curvature_residual = std::abs(curvature_radius(dsg.q_in) + first_d) / first_d;
  }
  switch (dsg.mode) {
    case DesignMode::line_focus: {
      // Exact width match, geometric phase. Im(1/q) stands in for the width.
      const double ih = (1.0 / q_h).imag(), iv = (1.0 / q_v).imag();
      const double width_residual = std::abs(ih - iv) / std::abs(ih);
      rep.pass = width_residual < 1e-9 && rep.phase_residual < 0.25 &&
                 rep.mode_match_residual < 0.05;
      break;
    }
    default:
      rep.pass = rep.mode_match_residual < 1e-9 && rep.phase_residual < 1e-9 &&
                 (!rep.curvature_residual || *rep.curvature_residual < 1e-9);
      break;
  }
  return rep;
}

// Full line for a wave run: a transfer lens turns a waist beam of the right
// width into q_in, and a matching lens after QP2 flattens the phase front.
struct WaveSetup {
  OpticsLine line;
  Complex q_source{0.0, 1.0};     // stigmatic waist beam entering the line
  Complex q_reference{0.0, 1.0};  // stigmatic waist beam after the flattening lens
};

inline WaveSetup wave_line(const PhaseShifterDesign& dsg,
                           std::optional<double> off_surrogate_f = std::nullopt) {
  WaveSetup ws;
  ws.q_source = Complex(0.0, std::norm(dsg.q_in) / dsg.q_in.imag());
  const double r_in = curvature_radius(dsg.q_in);
  if (std::isfinite(r_in)) ws.line.push_back(RoundLens{-r_in});
  OpticsLine body = design_line(dsg);
  if (off_surrogate_f) {
    for (Element& e : body)
      if (auto* qp = std::get_if<Quadrupole>(&e); qp && !qp->f) qp->f = *off_surrogate_f;
  }
  ws.line.insert(ws.line.end(), body.begin(), body.end());
  const double r_out = curvature_radius(dsg.q_out);
  Complex q_ref = dsg.q_out;
  if (std::isfinite(r_out)) {
    ws.line.push_back(RoundLens{r_out});
    q_ref = apply_lens(dsg.q_out, r_out);
  }
  ws.q_reference = q_ref;
  return ws;
}

}  // namespace qpgate
