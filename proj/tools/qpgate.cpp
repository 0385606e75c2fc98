// Command-line front end: design quadrupole phase shifters, decompose and
// compile unitaries, run the analytic and wave engines, analyze field dumps.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qpgate/qpgate.hpp"

namespace {

using namespace qpgate;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ContractError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw ContractError("cannot open " + out_path);
  out << text;
}

Complex parse_complex(std::string text) {
  text.erase(std::remove_if(text.begin(), text.end(),
                            [](unsigned char c) { return std::isspace(c); }),
             text.end());
  if (text.empty()) throw ContractError("empty complex number");
  if (text == "i" || text == "+i") return Complex(0.0, 1.0);
  if (text == "-i") return Complex(0.0, -1.0);
  const char* begin = text.c_str();
  char* end = nullptr;
  double first = std::strtod(begin, &end);
  if (end == begin) throw ContractError("cannot parse complex number '" + text + "'");
  if (*end == '\0') return Complex(first, 0.0);
  if (*end == 'i' && *(end + 1) == '\0') return Complex(0.0, first);
  // re +/- im i
  const char* second_begin = end;
  double second;
  if ((*end == '+' || *end == '-') && *(end + 1) == 'i' && *(end + 2) == '\0') {
    second = (*end == '+') ? 1.0 : -1.0;
  } else {
    char* end2 = nullptr;
    second = std::strtod(second_begin, &end2);
    if (end2 == second_begin || *end2 != 'i' || *(end2 + 1) != '\0')
      throw ContractError("cannot parse complex number '" + text + "'");
  }
  return Complex(first, second);
}

Unitary2 parse_unitary(const std::string& text) {
  std::vector<std::string> rows;
  std::stringstream ss(text);
  std::string row;
  while (std::getline(ss, row, ';')) rows.push_back(row);
  if (rows.size() != 2) throw ContractError("unitary needs two ';'-separated rows");
  Unitary2 u;
  for (int r = 0; r < 2; ++r) {
    std::stringstream rs(rows[r]);
    std::string entry;
    int c = 0;
    while (std::getline(rs, entry, ',')) {
      if (c >= 2) throw ContractError("unitary row has more than two entries");
      u(r, c++) = parse_complex(entry);
    }
    if (c != 2) throw ContractError("unitary row needs two ','-separated entries");
  }
  return u;
}

std::pair<double, double> parse_theta_phi(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos)
    throw ContractError("expected 'theta,phi' with angle units, got '" + text + "'");
  const double theta = parse_angle(text.substr(0, comma));
  const double phi = parse_angle(text.substr(comma + 1));
  return {theta, phi};
}

FreeParameter free_parameter_from_flags(bool symmetric, const std::string& f1_text,
                                        const std::string& rayleigh_text) {
  const int given = (symmetric ? 1 : 0) + (f1_text.empty() ? 0 : 1) +
                    (rayleigh_text.empty() ? 0 : 1);
  if (given > 1)
    throw ContractError("choose exactly one free parameter: --symmetric, --f1 or --rayleigh "
                        "(the mode-matching equations leave a single degree of freedom)");
  if (!f1_text.empty()) return FreeF1{parse_length(f1_text)};
  if (!rayleigh_text.empty()) return FreeInputRayleigh{parse_length(rayleigh_text)};
  return FreeSymmetric{};
}

PhaseShifterDesign design_from_flags(const ElectronContext& ctx, double d, double phase,
                                     const FreeParameter& free, double w_geom,
                                     std::vector<std::string>* notes) {
  const double p = wrap_pi(phase);
  if (p == 0.0 || std::abs(p) == pi) {
    PhaseShifterDesign dsg = design_edge(ctx, d, p, w_geom);
    if (notes && dsg.mode == DesignMode::qps_off)
      notes->push_back("quadrupoles off; incident beam set for a geometric focus at d/2 = " +
                       format_double(d / 2.0) + " m");
    return dsg;
  }
  return design(d, p, free);
}

// ---------------------------------------------------------------- simulate

struct LineSetup {
  OpticsLine line;
  Complex q_source{0.0, 1.0};
  ModeState analytic_out;  // filled after the analytic pass
};

LineSetup line_for_design(const PhaseShifterDesign& dsg, std::optional<double> surrogate) {
  WaveSetup ws = wave_line(dsg, surrogate);
  LineSetup ls;
  ls.line = std::move(ws.line);
  ls.q_source = ws.q_source;
  return ls;
}

LineSetup line_for_schedule(const GateSchedule& sched, std::optional<double> surrogate,
                            double fallback_w_in_m, double energy_kev) {
  LineSetup ls;
  const ElectronContext ctx = electron_context(energy_kev);
  // source beam: the first shifter dictates the waist; otherwise a default
  Complex q0(0.0, rayleigh_range(fallback_w_in_m, ctx));
  for (const GateStage& st : sched.stages)
    if (const auto* sh = std::get_if<ShiftStage>(&st)) {
      q0 = Complex(0.0, std::norm(sh->design.q_in) / sh->design.q_in.imag());
      break;
    }
  ls.q_source = q0;
  Complex q_cursor = q0;
  for (const GateStage& st : sched.stages) {
    if (const auto* rot = std::get_if<RotateStage>(&st)) {
      ls.line.push_back(Rotator{rot->angle});
      continue;
    }
    const auto& sh = std::get<ShiftStage>(st);
    const Complex q_need(0.0, std::norm(sh.design.q_in) / sh.design.q_in.imag());
    if (std::abs(q_cursor - q_need) > 1e-9 * std::abs(q_need))
      throw ContractError("schedule: consecutive shift stages have incompatible beam "
                          "interfaces; use a chained design inside one stage");
    WaveSetup ws = wave_line(sh.design, surrogate);
    ls.line.insert(ls.line.end(), ws.line.begin(), ws.line.end());
    q_cursor = ws.q_reference;
  }
  return ls;
}

double max_width_along(const ElectronContext& ctx, const OpticsLine& line, Complex q0,
                       Complex a, Complex b) {
  ModeState s = make_mode_state(q0, q0, a, b);
  double w = std::max(beam_width(s.q_h, ctx), beam_width(s.q_v, ctx));
  for (const Element& e : line) {
    s = apply_element(std::move(s), e);
    w = std::max({w, beam_width(s.q_h, ctx), beam_width(s.q_v, ctx)});
  }
  return w;
}

void write_zscan_csv(const ElectronContext& ctx, const OpticsLine& line, Complex q0, Complex a,
                     Complex b, const std::string& path, int steps_per_drift) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ContractError("cannot open " + path);
  out << "z_m,w_h_m,w_v_m,R_h_m,R_v_m,gamma_h_rad,gamma_v_rad,delta_phi_accum_rad\n";
  ModeState s = make_mode_state(q0, q0, a, b);
  double z = 0.0;
  const auto row = [&](const ModeState& st) {
    out << format_double(z) << ',' << format_double(beam_width(st.q_h, ctx)) << ','
        << format_double(beam_width(st.q_v, ctx)) << ','
        << format_double(curvature_radius(st.q_h)) << ','
        << format_double(curvature_radius(st.q_v)) << ','
        << format_double(gouy_phase(st.q_h)) << ',' << format_double(gouy_phase(st.q_v)) << ','
        << format_double(st.accum_gouy_v - st.accum_gouy_h) << '\n';
  };
  row(s);
  for (const Element& e : line) {
    if (const auto* drift = std::get_if<Drift>(&e)) {
      const int steps = std::max(1, steps_per_drift);
      const double dz = drift->length / steps;
      for (int i = 0; i < steps; ++i) {
        s = apply_drift(std::move(s), dz);
        z += dz;
        row(s);
      }
    } else {
      s = apply_element(std::move(s), e);
      row(s);
    }
  }
}

struct EngineReport {
  double theta = 0.0, phi = 0.0, chi = 0.0, fidelity = 0.0;
  double residual_power = 0.0, oam = 0.0;  // wave only
};

void append_angles(JsonWriter& w, const char* key, double theta, double phi) {
  w.key(key).begin_object();
  w.key("theta_rad").value(theta);
  w.key("phi_rad").value(phi);
  w.end_object();
}

int cmd_simulate(const std::string& schedule_path, const std::string& design_path,
                 const std::string& input_text, const std::string& engine,
                 std::size_t grid_n, const std::string& extent_text,
                 const std::string& dump_dir, const std::string& zscan_path,
                 const std::string& target_text, bool surrogate_1km,
                 const std::string& out_path) {
  const auto [theta_in, phi_in] = parse_theta_phi(input_text);
  const QubitState psi_in = state_from_angles(theta_in, wrap_2pi(phi_in));

  double energy_kev = 0.0;
  std::optional<double> surrogate;
  if (surrogate_1km) surrogate = 1000.0;

  LineSetup ls;
  QubitState psi_target;
  if (!design_path.empty()) {
    const ParsedDesignDocument doc = parse_design_document(read_file(design_path));
    energy_kev = doc.energy_kev;
    ls = line_for_design(doc.design, surrogate);
    psi_target = state_from_angles(theta_in, wrap_2pi(phi_in + doc.design.delta_phi));
  } else {
    const ParsedScheduleDocument doc = parse_schedule_document(read_file(schedule_path));
    energy_kev = doc.energy_kev;
    ls = line_for_schedule(doc.schedule, surrogate, 500e-9, doc.energy_kev);
    psi_target = apply_schedule_lab(doc.schedule, psi_in);
  }
  if (!target_text.empty()) {
    const auto [tt, tp] = parse_theta_phi(target_text);
    psi_target = state_from_angles(tt, wrap_2pi(tp));
  }
  const ElectronContext ctx = electron_context(energy_kev);
  const StateAngles target_angles = angles_from_state(psi_target);

  const bool run_analytic = engine == "analytic" || engine == "both";
  const bool run_wave = engine == "wave" || engine == "both";
  if (!run_analytic && !run_wave)
    throw ContractError("--engine must be analytic, wave or both");

  // analytic pass (always needed: the wave reference beam comes from it)
  ModeState s0 = make_mode_state(ls.q_source, ls.q_source, psi_in.a, psi_in.b);
  ModeState s_out = propagate_line(s0, ls.line);
  const Complex q_ref = 2.0 / (1.0 / s_out.q_h + 1.0 / s_out.q_v);

  EngineReport analytic;
  {
    const Complex common = std::polar(1.0, s_out.common_phase);
    Complex a = s_out.a * common, b = s_out.b * common;
    const double norm = std::sqrt(std::norm(a) + std::norm(b));
    a /= norm;
    b /= norm;
    const StateAngles ang = angles_from_state(QubitState{a, b});
    analytic.theta = ang.theta;
    analytic.phi = ang.phi;
    analytic.chi = ang.global_phase;
    analytic.fidelity =
        std::norm(a * std::conj(psi_target.a) + b * std::conj(psi_target.b));
  }

  EngineReport wave;
  std::size_t used_n = 0;
  double used_extent = 0.0;
  if (run_wave) {
    const double wmax = max_width_along(ctx, ls.line, ls.q_source, psi_in.a, psi_in.b);
    double extent = extent_text.empty() ? 6.0 * wmax : parse_length(extent_text);
    GridSpec spec{grid_n, extent, 0.0};
    FieldGrid field = sample_state(psi_in.a, psi_in.b, ls.q_source, ls.q_source, spec, ctx);
    RunOptions opt;
    opt.off_surrogate_f = surrogate;
    if (!dump_dir.empty()) {
      std::filesystem::create_directories(dump_dir);
      write_qpgf(field, dump_dir + "/input.qpgf");
      opt.on_element = [&](const FieldGrid& fg, std::size_t idx) {
        char name[32];
        std::snprintf(name, sizeof(name), "/elem_%03zu.qpgf", idx);
        write_qpgf(fg, dump_dir + name);
      };
    }
    field = run_line(std::move(field), ls.line, opt);
    const OverlapResult ov =
        modal_overlap(field, q_ref, std::make_pair(psi_target.a, psi_target.b));
    wave.theta = ov.theta;
    wave.phi = ov.phi;
    wave.chi = ov.chi;
    wave.fidelity = ov.fidelity;
    wave.residual_power = ov.residual_power;
    wave.oam = oam_expectation(field);
    used_n = grid_n;
    used_extent = extent;
  }

  if (!zscan_path.empty())
    write_zscan_csv(ctx, ls.line, ls.q_source, psi_in.a, psi_in.b, zscan_path, 64);

  JsonWriter w;
  w.begin_object();
  w.key("engine").value(engine);
  w.key("energy_keV").value(energy_kev);
  append_angles(w, "input", theta_in, wrap_2pi(phi_in));
  append_angles(w, "target", target_angles.theta, target_angles.phi);
  w.key("grid");
  if (run_wave) {
    w.begin_object();
    w.key("n").value(used_n);
    w.key("extent_m").value(used_extent);
    w.end_object();
  } else {
    w.null();
  }
  w.key("analytic");
  if (run_analytic) {
    w.begin_object();
    w.key("theta_rad").value(analytic.theta);
    w.key("phi_rad").value(analytic.phi);
    w.key("chi_rad").value(analytic.chi);
    w.key("fidelity").value(analytic.fidelity);
    w.end_object();
  } else {
    w.null();
  }
  w.key("wave");
  if (run_wave) {
    w.begin_object();
    w.key("theta_rad").value(wave.theta);
    w.key("phi_rad").value(wave.phi);
    w.key("chi_rad").value(wave.chi);
    w.key("fidelity").value(wave.fidelity);
    w.key("residual_power").value(wave.residual_power);
    w.key("oam_hbar").value(wave.oam);
    w.end_object();
  } else {
    w.null();
  }
  w.key("delta");
  if (run_analytic && run_wave) {
    w.begin_object();
    w.key("theta_rad").value(std::abs(wave.theta - analytic.theta));
    w.key("phi_rad").value(std::abs(wrap_pi(wave.phi - analytic.phi)));
    w.end_object();
  } else {
    w.null();
  }
  w.end_object();
  write_output(std::move(w).str() + "\n", out_path);
  return 0;
}

// ---------------------------------------------------------------- analyze

int cmd_analyze(const std::string& field_path, const std::string& ref_text,
                const std::string& ref_waist_text, const std::string& target_text,
                const std::string& render_path, const std::string& out_path) {
  FieldGrid f = read_qpgf(field_path);
  if (ref_text.empty() == ref_waist_text.empty())
    throw ContractError("give exactly one of --reference (Rayleigh range) or "
                        "--reference-waist (waist width)");
  double z_r = 0.0, z0 = 0.0;
  const std::string& txt = ref_text.empty() ? ref_waist_text : ref_text;
  const auto comma = txt.find(',');
  const std::string first = comma == std::string::npos ? txt : txt.substr(0, comma);
  if (comma != std::string::npos) z0 = parse_length(txt.substr(comma + 1));
  if (!ref_text.empty()) z_r = parse_length(first);
  else z_r = rayleigh_range(parse_length(first), f.ctx);
  const Complex q_ref(f.z - z0, z_r);

  std::optional<std::pair<Complex, Complex>> target;
  if (!target_text.empty()) {
    const auto [tt, tp] = parse_theta_phi(target_text);
    const QubitState t = state_from_angles(tt, wrap_2pi(tp));
    target = std::make_pair(t.a, t.b);
  }
  const OverlapResult ov = modal_overlap(f, q_ref, target);
  const double oam = oam_expectation(f);
  if (!render_path.empty()) render_ppm(f, render_path);

  JsonWriter w;
  w.begin_object();
  w.key("n").value(f.n);
  w.key("extent_m").value(f.extent);
  w.key("z_m").value(f.z);
  w.key("energy_keV").value(f.ctx.kinetic_energy_kev);
  w.key("a").begin_object();
  w.key("re").value(ov.a.real());
  w.key("im").value(ov.a.imag());
  w.end_object();
  w.key("b").begin_object();
  w.key("re").value(ov.b.real());
  w.key("im").value(ov.b.imag());
  w.end_object();
  w.key("residual_power").value(ov.residual_power);
  w.key("theta_rad").value(ov.theta);
  w.key("phi_rad").value(ov.phi);
  w.key("chi_rad").value(ov.chi);
  w.key("oam_hbar").value(oam);
  w.key("fidelity");
  if (target) w.value(ov.fidelity);
  else w.null();
  w.key("reference_valid").value(ov.reference_valid);
  w.end_object();
  write_output(std::move(w).str() + "\n", out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quadrupole-based phase shifters and two-state gates for electron beams"};
  app.require_subcommand(1);

  // ------------------------------------------------------------- design
  auto* design_cmd = app.add_subcommand("design", "Solve a phase-shifter design");
  std::string d_text, phase_text, f1_text, rayleigh_text, w_geom_text = "1000nm";
  std::string energy_text = "200", out_path;
  bool symmetric = false, do_verify = false;
  design_cmd->add_option("--d", d_text, "quadrupole spacing (length with unit)")->required();
  design_cmd->add_option("--phase", phase_text, "relative phase (angle with unit)")->required();
  design_cmd->add_flag("--symmetric", symmetric, "symmetric setup f1 = f2 (default)");
  design_cmd->add_option("--f1", f1_text, "choose f1 (length with unit)");
  design_cmd->add_option("--rayleigh", rayleigh_text, "choose the input Rayleigh range");
  design_cmd->add_option("--w-geom", w_geom_text, "incident width for edge phases 0/pi");
  design_cmd->add_option("--energy", energy_text, "beam energy in keV");
  design_cmd->add_flag("--verify", do_verify, "verify by analytic propagation");
  design_cmd->add_option("--out", out_path, "write the document here instead of stdout");

  // ---------------------------------------------------------- decompose
  auto* dec_cmd = app.add_subcommand("decompose", "Euler-decompose a unitary into a schedule");
  std::string unitary_text, target_text, dec_d_text = "120mm", dec_energy_text = "200";
  std::string dec_f1_text, dec_rayleigh_text, dec_w_geom_text = "1000nm", dec_out;
  std::string edge_policy = "chain";
  bool dec_symmetric = false;
  dec_cmd->add_option("--unitary", unitary_text, "2x2 complex matrix 'a,b;c,d'");
  dec_cmd->add_option("--target", target_text,
                      "state 'theta,phi' to prepare from the horizontal mode "
                      "(rotate theta/2, then shift phi)");
  dec_cmd->add_option("--d", dec_d_text, "quadrupole spacing");
  dec_cmd->add_option("--energy", dec_energy_text, "beam energy in keV");
  dec_cmd->add_flag("--symmetric", dec_symmetric, "symmetric designs (default)");
  dec_cmd->add_option("--f1", dec_f1_text, "design free parameter f1");
  dec_cmd->add_option("--rayleigh", dec_rayleigh_text, "design free parameter zR");
  dec_cmd->add_option("--w-geom", dec_w_geom_text, "incident width for geometric edges");
  dec_cmd->add_option("--edge", edge_policy, "pi-phase realization: chain|geometric");
  dec_cmd->add_option("--out", dec_out, "output path");

  // ----------------------------------------------------------- simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Run a design or schedule on a state");
  std::string sim_schedule, sim_design, sim_input, sim_engine = "both", sim_extent;
  std::string sim_dump, sim_zscan, sim_target, sim_out;
  std::size_t sim_grid = 1024;
  bool sim_surrogate = false;
  sim_cmd->add_option("--schedule", sim_schedule, "schedule document path");
  sim_cmd->add_option("--design", sim_design, "design document path");
  sim_cmd->add_option("--input", sim_input, "input state 'theta,phi'")->required();
  sim_cmd->add_option("--engine", sim_engine, "analytic|wave|both (default both)");
  sim_cmd->add_option("--grid", sim_grid, "wave grid size (power of two)");
  sim_cmd->add_option("--extent", sim_extent, "wave grid extent (length with unit)");
  sim_cmd->add_option("--dump-fields", sim_dump, "directory for per-element field dumps");
  sim_cmd->add_option("--zscan", sim_zscan, "CSV of analytic beam properties along z");
  sim_cmd->add_option("--target", sim_target, "override the target state 'theta,phi'");
  sim_cmd->add_flag("--surrogate-1km", sim_surrogate,
                    "model switched-off quadrupoles as 1 km lenses");
  sim_cmd->add_option("--out", sim_out, "output path");

  // ------------------------------------------------------------ analyze
  auto* ana_cmd = app.add_subcommand("analyze", "Mode-decompose a field dump");
  std::string ana_field, ana_ref, ana_ref_waist, ana_target, ana_render, ana_out;
  ana_cmd->add_option("--field", ana_field, "field dump (.qpgf)")->required();
  ana_cmd->add_option("--reference", ana_ref, "reference beam 'zR[,z_waist]' (lengths)");
  ana_cmd->add_option("--reference-waist", ana_ref_waist,
                      "reference beam 'w0[,z_waist]' (lengths)");
  ana_cmd->add_option("--target", ana_target, "target state 'theta,phi' for fidelity");
  ana_cmd->add_option("--render", ana_render, "write a color-wheel PPM image");
  ana_cmd->add_option("--out", ana_out, "output path");

  try {
    app.parse(argc, argv);

    if (design_cmd->parsed()) {
      const ElectronContext ctx = electron_context(parse_energy_kev(energy_text));
      const double d = parse_length(d_text);
      const double phase = parse_angle(phase_text);
      const FreeParameter free = free_parameter_from_flags(symmetric, f1_text, rayleigh_text);
      std::vector<std::string> notes;
      PhaseShifterDesign dsg =
          design_from_flags(ctx, d, phase, free, parse_length(w_geom_text), &notes);
      for (const std::string& msg : dsg.warnings) std::cerr << "warning: " << msg << "\n";
      for (const std::string& msg : notes) std::cerr << "note: " << msg << "\n";
      std::optional<VerifyReport> rep;
      if (do_verify) rep = verify(ctx, dsg);
      write_output(design_document(ctx, dsg, rep), out_path);
      return (rep && !rep->pass) ? 1 : 0;
    }

    if (dec_cmd->parsed()) {
      if (unitary_text.empty() == target_text.empty())
        throw ContractError("give exactly one of --unitary or --target");
      const ElectronContext ctx = electron_context(parse_energy_kev(dec_energy_text));
      CompileOptions opt;
      opt.free = free_parameter_from_flags(dec_symmetric, dec_f1_text, dec_rayleigh_text);
      opt.w_geom = parse_length(dec_w_geom_text);
      if (edge_policy == "geometric") opt.edge = EdgePhasePolicy::geometric;
      else if (edge_policy != "chain") throw ContractError("--edge must be chain or geometric");
      GateSchedule sched;
      if (!unitary_text.empty()) {
        const Unitary2 u = parse_unitary(unitary_text);
        if (!is_unitary(u, 1e-8)) throw ContractError("matrix is not unitary (tol 1e-8)");
        sched = compile(ctx, u, parse_length(dec_d_text), opt);
      } else {
        const auto [tt, tp] = parse_theta_phi(target_text);
        sched = prepare_state_schedule(ctx, tt, wrap_2pi(tp), parse_length(dec_d_text), opt);
      }
      write_output(schedule_document(ctx, sched), dec_out);
      return 0;
    }

    if (sim_cmd->parsed()) {
      if (sim_schedule.empty() == sim_design.empty())
        throw ContractError("give exactly one of --schedule or --design");
      if (!fft::is_power_of_two(sim_grid))
        throw ContractError("--grid must be a power of two");
      return cmd_simulate(sim_schedule, sim_design, sim_input, sim_engine, sim_grid,
                          sim_extent, sim_dump, sim_zscan, sim_target, sim_surrogate,
                          sim_out);
    }

    return cmd_analyze(ana_field, ana_ref, ana_ref_waist, ana_target, ana_render, ana_out);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const ContractError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ValidityError& e) {
    std::cerr << "numerical-validity error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
