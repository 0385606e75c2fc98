#include <catch2/catch.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "qpgate/field.hpp"
#include "qpgate/field_io.hpp"
#include "qpgate/math_util.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CmdResult {
  int exit_code = -1;
  std::string out;
};

CmdResult run_cli(const std::string& args) {
  const std::string cmd = std::string(QPGATE_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CmdResult r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.exit_code = WEXITSTATUS(status);
  return r;
}

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / "qpgate_cli_tests";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("design command emits the symmetric pi/2 document") {
  const CmdResult r = run_cli("design --d 120mm --phase 90deg --symmetric --energy 200");
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["energy_keV"].get<double>() == 200.0);
  CHECK(doc["mode"] == "normal");
  CHECK(doc["f1_m"].get<double>() == Approx(-0.169705627484771).epsilon(1e-9));
  CHECK(doc["f2_m"].get<double>() == Approx(-0.169705627484771).epsilon(1e-9));
  CHECK(doc["q_in"]["re_m"].get<double>() == Approx(-0.08).epsilon(1e-12));
  CHECK(doc["w_in_m"].get<double>() == Approx(3.6807e-7).epsilon(1e-3));
}

TEST_CASE("design command verification and edge routing") {
  SECTION("verified pi/2 design passes") {
    const CmdResult r = run_cli("design --d 120mm --phase 90deg --verify");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    REQUIRE(doc.contains("verification"));
    CHECK(doc["verification"]["pass"].get<bool>());
    CHECK(doc["verification"]["mode_match_residual"].get<double>() < 1e-9);
  }
  SECTION("phase 0 routes to the qps_off edge design") {
    const CmdResult r = run_cli("design --d 120mm --phase 0deg");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["mode"] == "qps_off");
    CHECK(doc["f1_m"].is_null());
    CHECK(doc["w_geom_m"].get<double>() == Approx(1e-6));
  }
  SECTION("phase 180 routes to the line-focus edge design") {
    const CmdResult r = run_cli("design --d 120mm --phase 180deg");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["mode"] == "line_focus");
    CHECK(doc["f1_m"].get<double>() == Approx(-0.12));
  }
}

TEST_CASE("design command rejects contract violations with exit 2") {
  CHECK(run_cli("design --d 120mm --phase 90deg --f1 100mm").exit_code == 2);  // sign(u) clash
  CHECK(run_cli("design --d 120 --phase 90deg").exit_code == 2);               // bare length
  CHECK(run_cli("design --d 120mm --phase 90").exit_code == 2);                // bare angle
  CHECK(run_cli("design --d 120mm --phase 90deg --f1 -100mm --rayleigh 30mm").exit_code == 2);
  CHECK(run_cli("design --d 120mm --phase 90deg --energy -5").exit_code == 2);
}

TEST_CASE("cli output is byte-identical across runs") {
  const CmdResult a = run_cli("design --d 137mm --phase 33deg --verify");
  const CmdResult b = run_cli("design --d 137mm --phase 33deg --verify");
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("decompose command") {
  SECTION("identity gives an empty stage list") {
    const CmdResult r = run_cli("decompose --unitary '1,0;0,1' --d 120mm");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["stages"].empty());
  }
  SECTION("diag(1, i) is a single pi/2 shift") {
    const CmdResult r = run_cli("decompose --unitary '1,0;0,i' --d 120mm");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    REQUIRE(doc["stages"].size() == 1);
    CHECK(doc["stages"][0]["type"] == "shift");
    CHECK(doc["stages"][0]["delta_phi_rad"].get<double>() == Approx(qpgate::pi / 2.0));
    CHECK(doc["stages"][0]["design"]["mode"] == "normal");
  }
  SECTION("non-unitary input exits 2") {
    CHECK(run_cli("decompose --unitary '1,0;0,2' --d 120mm").exit_code == 2);
  }
  SECTION("target preparation: rotate theta/2 then shift phi, and it runs") {
    const fs::path sched = temp_dir() / "prep.json";
    REQUIRE(run_cli("decompose --target 90deg,90deg --d 120mm --out " + sched.string())
                .exit_code == 0);
    std::ifstream in(sched);
    REQUIRE(in.good());
    const json doc = json::parse(in);
    REQUIRE(doc["stages"].size() == 2);
    CHECK(doc["stages"][0]["type"] == "rotate");
    CHECK(doc["stages"][0]["angle_rad"].get<double>() == Approx(qpgate::pi / 4.0));
    CHECK(doc["stages"][1]["type"] == "shift");
    CHECK(doc["stages"][1]["delta_phi_rad"].get<double>() == Approx(qpgate::pi / 2.0));
    CHECK_FALSE(doc["source_unitary"].is_null());
    // the physical run lands on the requested state
    const CmdResult sim = run_cli("simulate --schedule " + sched.string() +
                                  " --input 0deg,0deg --engine analytic --target 90deg,90deg");
    REQUIRE(sim.exit_code == 0);
    const json rep = json::parse(sim.out);
    CHECK(rep["analytic"]["theta_rad"].get<double>() == Approx(qpgate::pi / 2.0).margin(1e-9));
    CHECK(rep["analytic"]["phi_rad"].get<double>() == Approx(qpgate::pi / 2.0).margin(1e-9));
    CHECK(rep["analytic"]["fidelity"].get<double>() == Approx(1.0).margin(1e-9));
  }
}

TEST_CASE("simulate command") {
  const fs::path dir = temp_dir();
  const fs::path design_path = dir / "halfpi.json";
  REQUIRE(run_cli("design --d 120mm --phase 90deg --out " + design_path.string()).exit_code == 0);

  SECTION("analytic run reports the shifted azimuth") {
    const CmdResult r = run_cli("simulate --design " + design_path.string() +
                                " --input 90deg,0deg --engine analytic");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["analytic"]["phi_rad"].get<double>() == Approx(qpgate::pi / 2.0).margin(1e-9));
    CHECK(doc["analytic"]["fidelity"].get<double>() == Approx(1.0).margin(1e-9));
    CHECK(doc["wave"].is_null());
    CHECK(doc["target"]["phi_rad"].get<double>() == Approx(qpgate::pi / 2.0).margin(1e-12));
  }
  SECTION("both engines agree on a small grid") {
    const CmdResult r = run_cli("simulate --design " + design_path.string() +
                                " --input 90deg,0deg --engine both --grid 256");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["wave"]["fidelity"].get<double>() > 0.995);
    CHECK(doc["delta"]["phi_rad"].get<double>() < 0.02);
    CHECK(doc["delta"]["theta_rad"].get<double>() < 0.02);
    CHECK(doc["grid"]["n"].get<int>() == 256);
  }
  SECTION("zscan csv has the full column set") {
    const fs::path csv = dir / "scan.csv";
    REQUIRE(run_cli("simulate --design " + design_path.string() +
                    " --input 90deg,0deg --engine analytic --zscan " + csv.string())
                .exit_code == 0);
    std::ifstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header ==
          "z_m,w_h_m,w_v_m,R_h_m,R_v_m,gamma_h_rad,gamma_v_rad,delta_phi_accum_rad");
    int rows = 0;
    std::string line;
    while (std::getline(in, line)) ++rows;
    CHECK(rows > 64);
  }
  SECTION("undersized extent fails numerically with exit 3") {
    CHECK(run_cli("simulate --design " + design_path.string() +
                  " --input 90deg,0deg --engine wave --grid 256 --extent 800nm")
              .exit_code == 3);
  }
  SECTION("empty schedule leaves the input unchanged") {
    const fs::path sched = dir / "empty.json";
    std::ofstream out(sched);
    out << "{\"energy_keV\": 200, \"stages\": [], \"source_unitary\": null, "
           "\"global_phase_rad\": 0}\n";
    out.close();
    const CmdResult r = run_cli("simulate --schedule " + sched.string() +
                                " --input 45deg,45deg --engine analytic");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["analytic"]["theta_rad"].get<double>() == Approx(qpgate::pi / 4.0).margin(1e-9));
    CHECK(doc["analytic"]["phi_rad"].get<double>() == Approx(qpgate::pi / 4.0).margin(1e-9));
    CHECK(doc["analytic"]["fidelity"].get<double>() == Approx(1.0).margin(1e-12));
  }
  SECTION("needs exactly one of design or schedule") {
    CHECK(run_cli("simulate --input 90deg,0deg").exit_code == 2);
  }
  SECTION("dumped fields close the loop through analyze") {
    const fs::path fields = dir / "fields";
    REQUIRE(run_cli("simulate --design " + design_path.string() +
                    " --input 90deg,0deg --engine wave --grid 256 --dump-fields " +
                    fields.string())
                .exit_code == 0);
    REQUIRE(fs::exists(fields / "input.qpgf"));
    REQUIRE(fs::exists(fields / "elem_004.qpgf"));  // after the flattening lens
    const CmdResult r = run_cli("analyze --field " + (fields / "elem_004.qpgf").string() +
                                " --reference-waist 368.0707nm,120mm --target 90deg,90deg");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["z_m"].get<double>() == Approx(0.12));
    CHECK(doc["fidelity"].get<double>() > 0.99);
    CHECK(doc["oam_hbar"].get<double>() == Approx(1.0).margin(0.02));
  }
}

TEST_CASE("analyze command") {
  using namespace qpgate;
  const fs::path dir = temp_dir();
  const ElectronContext ctx = electron_context(200.0);
  const double w0 = 400e-9;
  const Complex q0(0.0, rayleigh_range(w0, ctx));
  const GridSpec spec{128, 6.0 * 420e-9, 0.0};

  SECTION("horizontal mode dump reads back as theta = 0") {
    const fs::path dump = dir / "h.qpgf";
    write_qpgf(sample_hg({1, 0}, q0, q0, 0.0, spec, ctx), dump.string());
    const CmdResult r =
        run_cli("analyze --field " + dump.string() + " --reference-waist 400nm");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["theta_rad"].get<double>() == Approx(0.0).margin(1e-6));
    CHECK(doc["reference_valid"].get<bool>());
    CHECK(doc["fidelity"].is_null());
  }
  SECTION("vortex dump: angles, oam and a render") {
    const double inv = 1.0 / std::sqrt(2.0);
    const fs::path dump = dir / "v.qpgf";
    write_qpgf(sample_state(Complex(inv, 0.0), Complex(0.0, inv), q0, q0, spec, ctx),
               dump.string());
    const fs::path img = dir / "v.ppm";
    const CmdResult r = run_cli("analyze --field " + dump.string() +
                                " --reference-waist 400nm --target 90deg,90deg --render " +
                                img.string());
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["theta_rad"].get<double>() == Approx(qpgate::pi / 2.0).margin(1e-6));
    CHECK(doc["phi_rad"].get<double>() == Approx(qpgate::pi / 2.0).margin(1e-6));
    CHECK(doc["oam_hbar"].get<double>() == Approx(1.0).margin(0.02));
    CHECK(doc["fidelity"].get<double>() == Approx(1.0).margin(1e-6));
    CHECK(fs::exists(img));
  }
  SECTION("truncated dump exits 2") {
    const fs::path dump = dir / "trunc.qpgf";
    write_qpgf(sample_hg({1, 0}, q0, q0, 0.0, spec, ctx), dump.string());
    fs::resize_file(dump, 80);
    CHECK(run_cli("analyze --field " + dump.string() + " --reference-waist 400nm").exit_code ==
          2);
  }
  SECTION("reference flags are mutually exclusive and required") {
    const fs::path dump = dir / "h2.qpgf";
    write_qpgf(sample_hg({1, 0}, q0, q0, 0.0, spec, ctx), dump.string());
    CHECK(run_cli("analyze --field " + dump.string()).exit_code == 2);
    CHECK(run_cli("analyze --field " + dump.string() +
                  " --reference 50mm --reference-waist 400nm")
              .exit_code == 2);
  }
}
