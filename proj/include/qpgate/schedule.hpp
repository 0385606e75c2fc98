#pragma once

#include <cmath>
#include <optional>
#include <variant>
#include <vector>

#include "qpgate/bloch.hpp"
#include "qpgate/design.hpp"
#include "qpgate/errors.hpp"
#include "qpgate/math_util.hpp"

namespace qpgate {

// Hardware realization of a unitary: coordinate rotations (Bloch Rx(2*angle))
// interleaved with quadrupole phase shifters (Bloch Rz(delta_phi)).
struct RotateStage {
  double angle = 0.0;  // physical frame rotation, rad
};

struct ShiftStage {
  double delta_phi = 0.0;
  PhaseShifterDesign design;
};

using GateStage = std::variant<RotateStage, ShiftStage>;

struct GateSchedule {
  std::vector<GateStage> stages;  // application order
  double global_phase = 0.0;
  std::optional<Unitary2> source_unitary;
};

// How compile realizes a shifter phase of exactly pi.
enum class EdgePhasePolicy { chain_halves, geometric };

struct CompileOptions {
  FreeParameter free = FreeSymmetric{};
  double w_geom = 1e-6;  // incident width for geometric edge designs
  EdgePhasePolicy edge = EdgePhasePolicy::chain_halves;
};

namespace detail {

// Rotator angles live on the mode space mod pi; a folded-away half turn is a
// global sign.
inline void push_rotation(GateSchedule& sched, double half_angle) {
  const double folded = std::remainder(half_angle, pi);
  const double turns = std::round((half_angle - folded) / pi);
  if (std::fmod(std::abs(turns), 2.0) == 1.0) sched.global_phase = wrap_pi(sched.global_phase + pi);
  if (std::abs(folded) < 1e-12) return;
  if (!sched.stages.empty()) {
    if (auto* rot = std::get_if<RotateStage>(&sched.stages.back())) {
      const double merged = rot->angle + folded;
      sched.stages.pop_back();
      push_rotation(sched, merged);
      return;
    }
  }
  sched.stages.push_back(RotateStage{folded});
}

}  // namespace detail

// Matrix-level semantics: Rotate(angle) acts as Rx(2*angle), Shift(delta_phi)
// as Rz(delta_phi).
inline QubitState simulate_schedule(const GateSchedule& sched, const QubitState& psi) {
  QubitState s = psi;
  for (const GateStage& st : sched.stages) {
    if (const auto* rot = std::get_if<RotateStage>(&st))
      s = apply_unitary(rx(2.0 * rot->angle), s);
    else
      s = apply_unitary(rz(std::get<ShiftStage>(st).delta_phi), s);
  }
  return s;
}

inline Unitary2 schedule_unitary(const GateSchedule& sched) {
  Unitary2 u;
  for (const GateStage& st : sched.stages) {
    if (const auto* rot = std::get_if<RotateStage>(&st)) u = rx(2.0 * rot->angle) * u;
    else u = rz(std::get<ShiftStage>(st).delta_phi) * u;
  }
  return u;
}

// Lab-frame semantics used by the physical engines: rotators act as the real
// rotation matrix on (a, b), shifters as diag(1, e^{i delta_phi}).
inline QubitState apply_schedule_lab(const GateSchedule& sched, const QubitState& psi) {
  QubitState s = psi;
  for (const GateStage& st : sched.stages) {
    if (const auto* rot = std::get_if<RotateStage>(&st)) {
      const double c = std::cos(rot->angle), sn = std::sin(rot->angle);
      const Complex a = s.a, b = s.b;
      s.a = c * a - sn * b;
      s.b = sn * a + c * b;
    } else {
      s.b *= std::polar(1.0, std::get<ShiftStage>(st).delta_phi);
    }
  }
  return s;
}

namespace detail {

inline ShiftStage make_shift_stage(const ElectronContext& ctx, double beta, double d,
                                   const CompileOptions& opt) {
  PhaseShifterDesign dsg;
  if (std::abs(std::abs(beta) - pi) < 1e-12) {
    if (opt.edge == EdgePhasePolicy::chain_halves) {
      PhaseShifterDesign half = design(d, pi / 2.0, opt.free);
      dsg = chain({half, half}, RelayPolicy::auto_insert);
    } else {
      dsg = design_edge(ctx, d, pi, opt.w_geom);
    }
  } else {
    dsg = design(d, beta, opt.free);
  }
  return ShiftStage{beta, std::move(dsg)};
}

}  // namespace detail

inline GateSchedule compile(const ElectronContext& ctx, const Unitary2& u, double d,
                            const CompileOptions& opt = {}) {
  if (!(d > 0.0)) throw ContractError("compile: spacing d must be positive");
  const EulerXZX e = euler_xzx_decompose(u);
  GateSchedule sched;
  sched.source_unitary = u;
  sched.global_phase = e.global_phase;
  detail::push_rotation(sched, e.alpha1 / 2.0);
  const double beta = wrap_pi(e.beta);
  if (std::abs(beta) >= 1e-12)
    sched.stages.push_back(detail::make_shift_stage(ctx, beta, d, opt));
  detail::push_rotation(sched, e.alpha2 / 2.0);
  return sched;
}

// Direct preparation of the state (theta, phi) from the horizontal mode:
// rotate the frame by theta/2, then shift the relative phase by phi. This is
// exact at the lab level, where a rotator is the real rotation matrix and a
// shifter multiplies the vertical amplitude by e^{i phi}.
inline GateSchedule prepare_state_schedule(const ElectronContext& ctx, double theta, double phi,
                                           double d, const CompileOptions& opt = {}) {
  if (!(d > 0.0)) throw ContractError("prepare_state_schedule: spacing d must be positive");
  if (theta < -1e-12 || theta > pi + 1e-12)
    throw ContractError("prepare_state_schedule: theta must lie in [0, pi]");
  GateSchedule sched;
  detail::push_rotation(sched, theta / 2.0);
  const double beta = wrap_pi(phi);
  if (std::abs(beta) >= 1e-12 && std::sin(theta) > 1e-12)
    sched.stages.push_back(detail::make_shift_stage(ctx, beta, d, opt));
  sched.source_unitary = schedule_unitary(sched);
  return sched;
}

}  // namespace qpgate
