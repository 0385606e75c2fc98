#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qpgate/bloch.hpp"
#include "qpgate/constants.hpp"
#include "qpgate/design.hpp"
#include "qpgate/errors.hpp"
#include "qpgate/json_writer.hpp"
#include "qpgate/schedule.hpp"

namespace qpgate {

namespace detail {

inline const char* mode_name(DesignMode m) {
  switch (m) {
    case DesignMode::normal: return "normal";
    case DesignMode::qps_off: return "qps_off";
    case DesignMode::line_focus: return "line_focus";
    default: return "chained";
  }
}

inline DesignMode mode_from_name(const std::string& s) {
  if (s == "normal") return DesignMode::normal;
  if (s == "qps_off") return DesignMode::qps_off;
  if (s == "line_focus") return DesignMode::line_focus;
  if (s == "chained") return DesignMode::chained;
  throw ContractError("design document: unknown mode '" + s + "'");
}

inline void write_opt(JsonWriter& w, const std::optional<double>& v) {
  if (v) w.value(*v);
  else w.null();
}

inline void write_q(JsonWriter& w, Complex q) {
  w.begin_object();
  w.key("re_m").value(q.real());
  w.key("im_m").value(q.imag());
  w.end_object();
}

// Keys of a design document, flat; chained sub-stages recurse without the
// energy key.
inline void write_design_fields(JsonWriter& w, const PhaseShifterDesign& d,
                                const ElectronContext& ctx, bool with_energy) {
  if (with_energy) w.key("energy_keV").value(ctx.kinetic_energy_kev);
  w.key("d_m").value(d.d);
  w.key("delta_phi_rad").value(d.delta_phi);
  w.key("mode").value(mode_name(d.mode));
  w.key("u");
  if (d.mode == DesignMode::normal) w.value(d.u);
  else w.null();
  w.key("f1_m");
  write_opt(w, d.f1);
  w.key("f2_m");
  write_opt(w, d.f2);
  w.key("w_geom_m");
  write_opt(w, d.w_geom);
  w.key("q_in");
  write_q(w, d.q_in);
  w.key("q_out");
  write_q(w, d.q_out);
  w.key("w_in_m").value(beam_width(d.q_in, ctx));
  w.key("w_out_m").value(beam_width(d.q_out, ctx));
  if (d.mode == DesignMode::chained) {
    w.key("stages").begin_array();
    for (const auto& st : d.stages) {
      w.begin_object();
      write_design_fields(w, st, ctx, false);
      w.end_object();
    }
    w.end_array();
    w.key("relays").begin_array();
    for (const auto& rel : d.relays) {
      if (!rel) {
        w.null();
        continue;
      }
      w.begin_object();
      w.key("f_a_m").value(rel->f_a);
      w.key("drift_m").value(rel->drift);
      w.key("f_b_m");
      write_opt(w, rel->f_b);
      w.end_object();
    }
    w.end_array();
  }
}

}  // namespace detail

inline std::string design_document(const ElectronContext& ctx, const PhaseShifterDesign& d,
                                   const std::optional<VerifyReport>& rep = {}) {
  JsonWriter w;
  w.begin_object();
  detail::write_design_fields(w, d, ctx, true);
  if (rep) {
    w.key("verification").begin_object();
    w.key("mode_match_residual").value(rep->mode_match_residual);
    w.key("achieved_phase_rad").value(rep->achieved_phase);
    w.key("curvature_residual");
    detail::write_opt(w, rep->curvature_residual);
    w.key("pass").value(rep->pass);
    w.end_object();
  }
  w.end_object();
  std::string out = std::move(w).str();
  out += '\n';
  return out;
}

namespace detail {

inline std::optional<double> read_opt(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

inline Complex read_q(const nlohmann::json& j) {
  return Complex(j.at("re_m").get<double>(), j.at("im_m").get<double>());
}

inline PhaseShifterDesign read_design_fields(const nlohmann::json& j) {
  PhaseShifterDesign d;
  d.mode = mode_from_name(j.at("mode").get<std::string>());
  d.d = j.at("d_m").get<double>();
  d.delta_phi = j.at("delta_phi_rad").get<double>();
  if (j.contains("u") && !j.at("u").is_null()) d.u = j.at("u").get<double>();
  d.f1 = read_opt(j, "f1_m");
  d.f2 = read_opt(j, "f2_m");
  d.w_geom = read_opt(j, "w_geom_m");
  d.q_in = read_q(j.at("q_in"));
  d.q_out = read_q(j.at("q_out"));
  if (d.mode == DesignMode::chained) {
    for (const auto& st : j.at("stages")) d.stages.push_back(read_design_fields(st));
    for (const auto& rel : j.at("relays")) {
      if (rel.is_null()) {
        d.relays.push_back(std::nullopt);
      } else {
        Relay r;
        r.f_a = rel.at("f_a_m").get<double>();
        r.drift = rel.at("drift_m").get<double>();
        r.f_b = read_opt(rel, "f_b_m");
        d.relays.push_back(r);
      }
    }
  }
  return d;
}

}  // namespace detail

struct ParsedDesignDocument {
  double energy_kev = 0.0;
  PhaseShifterDesign design;
  std::optional<VerifyReport> verification;
};

inline ParsedDesignDocument parse_design_document(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ContractError(std::string("design document: ") + e.what());
  }
  try {
    ParsedDesignDocument out;
    out.energy_kev = j.at("energy_keV").get<double>();
    out.design = detail::read_design_fields(j);
    if (j.contains("verification")) {
      VerifyReport rep;
      const auto& v = j.at("verification");
      rep.mode_match_residual = v.at("mode_match_residual").get<double>();
      rep.achieved_phase = v.at("achieved_phase_rad").get<double>();
      rep.curvature_residual = detail::read_opt(v, "curvature_residual");
      rep.pass = v.at("pass").get<bool>();
      const ElectronContext ctx = electron_context(out.energy_kev);
      rep.w_in = beam_width(out.design.q_in, ctx);
      rep.w_out = beam_width(out.design.q_out, ctx);
      rep.phase_residual = std::abs(wrap_pi(rep.achieved_phase - out.design.delta_phi));
      out.verification = rep;
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ContractError(std::string("design document: ") + e.what());
  }
}

inline std::string schedule_document(const ElectronContext& ctx, const GateSchedule& s) {
  JsonWriter w;
  w.begin_object();
  w.key("energy_keV").value(ctx.kinetic_energy_kev);
  w.key("stages").begin_array();
  for (const GateStage& st : s.stages) {
    w.begin_object();
    if (const auto* rot = std::get_if<RotateStage>(&st)) {
      w.key("type").value("rotate");
      w.key("angle_rad").value(rot->angle);
    } else {
      const auto& sh = std::get<ShiftStage>(st);
      w.key("type").value("shift");
      w.key("delta_phi_rad").value(sh.delta_phi);
      w.key("design").begin_object();
      detail::write_design_fields(w, sh.design, ctx, true);
      w.end_object();
    }
    w.end_object();
  }
  w.end_array();
  w.key("source_unitary");
  if (s.source_unitary) {
    w.begin_array();
    for (const Complex& c : s.source_unitary->m) {
      w.begin_array();
      w.value(c.real());
      w.value(c.imag());
      w.end_array();
    }
    w.end_array();
  } else {
    w.null();
  }
  w.key("global_phase_rad").value(s.global_phase);
  w.end_object();
  std::string out = std::move(w).str();
  out += '\n';
  return out;
}

struct ParsedScheduleDocument {
  double energy_kev = 0.0;
  GateSchedule schedule;
};

inline ParsedScheduleDocument parse_schedule_document(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ContractError(std::string("schedule document: ") + e.what());
  }
  try {
    ParsedScheduleDocument out;
    out.energy_kev = j.at("energy_keV").get<double>();
    for (const auto& st : j.at("stages")) {
      const std::string type = st.at("type").get<std::string>();
      if (type == "rotate") {
        out.schedule.stages.push_back(RotateStage{st.at("angle_rad").get<double>()});
      } else if (type == "shift") {
        ShiftStage sh;
        sh.delta_phi = st.at("delta_phi_rad").get<double>();
        sh.design = detail::read_design_fields(st.at("design"));
        out.schedule.stages.push_back(std::move(sh));
      } else {
        throw ContractError("schedule document: unknown stage type '" + type + "'");
      }
    }
    if (j.contains("source_unitary") && !j.at("source_unitary").is_null()) {
      Unitary2 u;
      const auto& arr = j.at("source_unitary");
      if (arr.size() != 4) throw ContractError("schedule document: source_unitary needs 4 entries");
      for (int i = 0; i < 4; ++i)
        u.m[i] = Complex(arr[i][0].get<double>(), arr[i][1].get<double>());
      out.schedule.source_unitary = u;
    }
    out.schedule.global_phase = j.at("global_phase_rad").get<double>();
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ContractError(std::string("schedule document: ") + e.what());
  }
}

}  // namespace qpgate
