#include <catch2/catch.hpp>

#include <cmath>
#include <random>

#include "qpgate/bloch.hpp"
#include "qpgate/schedule.hpp"

using namespace qpgate;

namespace {

// Haar-style random unitary: random SU(2) from a unit quaternion plus a phase.
Unitary2 random_unitary(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  double q0 = n(rng), q1 = n(rng), q2 = n(rng), q3 = n(rng);
  const double s = 1.0 / std::sqrt(q0 * q0 + q1 * q1 + q2 * q2 + q3 * q3);
  q0 *= s;
  q1 *= s;
  q2 *= s;
  q3 *= s;
  Unitary2 u;
  u(0, 0) = Complex(q0, q3);
  u(0, 1) = Complex(q2, q1);
  u(1, 0) = Complex(-q2, q1);
  u(1, 1) = Complex(q0, -q3);
  std::uniform_real_distribution<double> ph(0.0, 2.0 * pi);
  return std::polar(1.0, ph(rng)) * u;
}

QubitState random_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> th(0.0, pi), ph(0.0, 2.0 * pi);
  return state_from_angles(th(rng), ph(rng));
}

double state_fidelity(const QubitState& x, const QubitState& y) {
  return std::norm(x.a * std::conj(y.a) + x.b * std::conj(y.b));
}

}  // namespace

TEST_CASE("state from angles and back") {
  SECTION("poles") {
    const QubitState s = state_from_angles(0.0, 0.0);
    CHECK(s.a == Complex(1.0, 0.0));
    CHECK(std::abs(s.b) == 0.0);
  }
  SECTION("vortex-like state") {
    const QubitState s = state_from_angles(pi / 2.0, pi / 2.0);
    CHECK(s.a.real() == Approx(1.0 / std::sqrt(2.0)));
    CHECK(s.b.imag() == Approx(1.0 / std::sqrt(2.0)));
    CHECK(s.b.real() == Approx(0.0).margin(1e-15));
  }
  SECTION("range checks") {
    CHECK_THROWS_AS(state_from_angles(-0.1, 0.0), ContractError);
    CHECK_THROWS_AS(state_from_angles(pi + 0.1, 0.0), ContractError);
    CHECK_THROWS_AS(state_from_angles(1.0, -0.5), ContractError);
  }
  SECTION("round trip of 1000 random states") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> th(1e-6, pi - 1e-6), ph(0.0, 2.0 * pi - 1e-9);
    for (int i = 0; i < 1000; ++i) {
      const double theta = th(rng), phi = ph(rng);
      const StateAngles out = angles_from_state(state_from_angles(theta, phi));
      CHECK(out.theta == Approx(theta).margin(1e-12));
      CHECK(out.phi == Approx(phi).margin(1e-12));
      CHECK(out.global_phase == Approx(0.0).margin(1e-12));
    }
  }
  SECTION("global phase is gauge") {
    std::mt19937_64 rng(22);
    for (int i = 0; i < 100; ++i) {
      const QubitState s = random_state(rng);
      std::uniform_real_distribution<double> ph(-pi, pi);
      const double chi = ph(rng);
      const QubitState t{s.a * std::polar(1.0, chi), s.b * std::polar(1.0, chi)};
      const StateAngles sa = angles_from_state(s), ta = angles_from_state(t);
      CHECK(ta.theta == Approx(sa.theta).margin(1e-12));
      CHECK(ta.phi == Approx(sa.phi).margin(1e-12));
    }
  }
}

TEST_CASE("unitary application") {
  SECTION("identity") {
    const QubitState s = state_from_angles(1.1, 2.2);
    const QubitState t = apply_unitary(Unitary2{}, s);
    CHECK(t.a == s.a);
    CHECK(t.b == s.b);
  }
  SECTION("Rz advances the azimuth") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> ph(-pi, pi);
    for (int i = 0; i < 100; ++i) {
      const QubitState s = random_state(rng);
      const StateAngles before = angles_from_state(s);
      if (before.theta < 1e-3 || before.theta > pi - 1e-3) continue;
      const double dphi = ph(rng);
      const StateAngles after = angles_from_state(apply_unitary(rz(dphi), s));
      CHECK(after.theta == Approx(before.theta).margin(1e-12));
      CHECK(wrap_2pi(after.phi - before.phi) == Approx(wrap_2pi(dphi)).margin(1e-12));
    }
  }
  SECTION("Rx on |0> lands on the phi = 3pi/2 meridian") {
    const double t0 = 0.8;
    const StateAngles out = angles_from_state(apply_unitary(rx(t0), state_from_angles(0.0, 0.0)));
    CHECK(out.theta == Approx(t0).margin(1e-12));
    CHECK(out.phi == Approx(3.0 * pi / 2.0).margin(1e-12));
  }
  SECTION("non-unitary input is rejected") {
    Unitary2 bad;
    bad(0, 0) = Complex(1.3, 0.0);
    CHECK_THROWS_AS(apply_unitary(bad, state_from_angles(0.0, 0.0)), ContractError);
  }
  SECTION("Bloch vector rotates by the SO(3) x-rotation under Rx") {
    std::mt19937_64 rng(24);
    std::uniform_real_distribution<double> ang(-2.0 * pi, 2.0 * pi);
    for (int i = 0; i < 200; ++i) {
      const QubitState s = random_state(rng);
      const double t = ang(rng);
      const auto v = bloch_vector(s);
      const auto w = bloch_vector(apply_unitary(rx(t), s));
      const double c = std::cos(t), sn = std::sin(t);
      CHECK(w[0] == Approx(v[0]).margin(1e-12));
      CHECK(w[1] == Approx(c * v[1] - sn * v[2]).margin(1e-12));
      CHECK(w[2] == Approx(sn * v[1] + c * v[2]).margin(1e-12));
    }
  }
}

TEST_CASE("Euler x-z-x decomposition") {
  SECTION("identity") {
    const EulerXZX e = euler_xzx_decompose(Unitary2{});
    CHECK(e.alpha1 == 0.0);
    CHECK(e.beta == 0.0);
    CHECK(e.alpha2 == 0.0);
    CHECK(e.global_phase == 0.0);
  }
  SECTION("pure Rz") {
    const EulerXZX e = euler_xzx_decompose(rz(1.1));
    CHECK(e.alpha1 == Approx(0.0).margin(1e-15));
    CHECK(e.beta == Approx(1.1));
    CHECK(e.alpha2 == Approx(0.0).margin(1e-15));
  }
  SECTION("gimbal: pure Rx folds into alpha1 with alpha2 = 0") {
    const EulerXZX e = euler_xzx_decompose(rx(0.9));
    CHECK(e.alpha1 == Approx(0.9).margin(1e-12));
    CHECK(e.beta == Approx(0.0).margin(1e-12));
    CHECK(e.alpha2 == Approx(0.0).margin(1e-12));
  }
  SECTION("sigma_x and sigma_z") {
    Unitary2 sx;
    sx(0, 0) = sx(1, 1) = Complex(0.0, 0.0);
    sx(0, 1) = sx(1, 0) = Complex(1.0, 0.0);
    Unitary2 sz;
    sz(1, 1) = Complex(-1.0, 0.0);
    for (const Unitary2& u : {sx, sz}) {
      const EulerXZX e = euler_xzx_decompose(u);
      CHECK(frobenius_distance(euler_xzx_reconstruct(e), u) < 1e-12);
    }
  }
  SECTION("reconstruction of 1000 random unitaries within 1e-10") {
    std::mt19937_64 rng(25);
    for (int i = 0; i < 1000; ++i) {
      const Unitary2 u = random_unitary(rng);
      const EulerXZX e = euler_xzx_decompose(u);
      CHECK(e.alpha1 >= 0.0);
      CHECK(e.alpha1 < 2.0 * pi);
      CHECK(e.alpha2 >= 0.0);
      CHECK(e.alpha2 < 2.0 * pi);
      CHECK(e.beta >= 0.0);
      CHECK(e.beta <= pi);
      CHECK(frobenius_distance(euler_xzx_reconstruct(e), u) < 1e-10);
    }
  }
  SECTION("near-identity stays numerically tame") {
    Unitary2 u = rx(1e-13) * rz(1e-13);
    const EulerXZX e = euler_xzx_decompose(u);
    CHECK(frobenius_distance(euler_xzx_reconstruct(e), u) < 1e-12);
  }
}

TEST_CASE("compilation into rotators and shifters") {
  const ElectronContext ctx = electron_context(200.0);
  const double d = 0.12;

  SECTION("identity compiles to an empty schedule") {
    const GateSchedule s = compile(ctx, Unitary2{}, d);
    CHECK(s.stages.empty());
  }
  SECTION("Rz(pi/2) compiles to a single shift with the symmetric design") {
    const GateSchedule s = compile(ctx, rz(pi / 2.0), d);
    REQUIRE(s.stages.size() == 1);
    const auto* sh = std::get_if<ShiftStage>(&s.stages[0]);
    REQUIRE(sh);
    CHECK(sh->delta_phi == Approx(pi / 2.0));
    CHECK(*sh->design.f1 == Approx(-0.1697056274847714).epsilon(1e-12));
  }
  SECTION("Rx(t) compiles to a single rotator of t/2") {
    const double t0 = 1.3;
    const GateSchedule s = compile(ctx, rx(t0), d);
    REQUIRE(s.stages.size() == 1);
    const auto* rot = std::get_if<RotateStage>(&s.stages[0]);
    REQUIRE(rot);
    CHECK(rot->angle == Approx(t0 / 2.0));
  }
  SECTION("beta = pi routes through a chained design by default") {
    const GateSchedule s = compile(ctx, rz(pi), d);
    REQUIRE(s.stages.size() == 1);
    const auto* sh = std::get_if<ShiftStage>(&s.stages[0]);
    REQUIRE(sh);
    CHECK(sh->design.mode == DesignMode::chained);
    CHECK(sh->design.stages.size() == 2);
  }
  SECTION("beta = pi with the geometric policy uses the line focus") {
    CompileOptions opt;
    opt.edge = EdgePhasePolicy::geometric;
    const GateSchedule s = compile(ctx, rz(pi), d, opt);
    const auto* sh = std::get_if<ShiftStage>(&s.stages[0]);
    REQUIRE(sh);
    CHECK(sh->design.mode == DesignMode::line_focus);
  }
  SECTION("schedule reproduces the source unitary up to the recorded phase") {
    std::mt19937_64 rng(26);
    for (int i = 0; i < 200; ++i) {
      const Unitary2 u = random_unitary(rng);
      const GateSchedule s = compile(ctx, u, d);
      const Unitary2 again = std::polar(1.0, s.global_phase) * schedule_unitary(s);
      CHECK(frobenius_distance(again, u) < 1e-10);
    }
  }
}

TEST_CASE("schedule simulation") {
  const ElectronContext ctx = electron_context(200.0);
  const double d = 0.12;

  SECTION("empty schedule is the identity") {
    const QubitState s = state_from_angles(0.7, 0.3);
    const QubitState t = simulate_schedule(GateSchedule{}, s);
    CHECK(t.a == s.a);
    CHECK(t.b == s.b);
  }
  SECTION("a pi/2 shift advances an equatorial state's azimuth by pi/2") {
    GateSchedule s;
    s.stages.push_back(ShiftStage{pi / 2.0, design(d, pi / 2.0, FreeSymmetric{})});
    const StateAngles out =
        angles_from_state(simulate_schedule(s, state_from_angles(pi / 2.0, 0.0)));
    CHECK(out.theta == Approx(pi / 2.0).margin(1e-12));
    CHECK(out.phi == Approx(pi / 2.0).margin(1e-12));
  }
  SECTION("compile + simulate matches direct application for 100 random cases") {
    std::mt19937_64 rng(27);
    for (int i = 0; i < 100; ++i) {
      const Unitary2 u = random_unitary(rng);
      const QubitState psi = random_state(rng);
      const QubitState via = simulate_schedule(compile(ctx, u, d), psi);
      const QubitState direct = apply_unitary(u, psi);
      CHECK(state_fidelity(via, direct) == Approx(1.0).margin(1e-10));
    }
  }
  SECTION("state preparation schedules hit the target at the lab level") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> th(0.05, pi - 0.05), ph(0.05, 2.0 * pi - 0.05);
    for (int i = 0; i < 50; ++i) {
      const double theta = th(rng);
      double phi = ph(rng);
      if (std::abs(phi - pi) < 0.05) phi += 0.1;
      const GateSchedule s = prepare_state_schedule(ctx, theta, phi, d);
      const QubitState out = apply_schedule_lab(s, state_from_angles(0.0, 0.0));
      const QubitState want = state_from_angles(theta, wrap_2pi(phi));
      CHECK(state_fidelity(out, want) == Approx(1.0).margin(1e-12));
      // document invariant: the stored unitary reproduces from the stages
      REQUIRE(s.source_unitary);
      CHECK(frobenius_distance(*s.source_unitary,
                               std::polar(1.0, s.global_phase) * schedule_unitary(s)) < 1e-12);
    }
    // poles and zero phase collapse to the minimal stage list
    CHECK(prepare_state_schedule(ctx, 0.0, 1.0, d).stages.empty());
    CHECK(prepare_state_schedule(ctx, pi / 2.0, 0.0, d).stages.size() == 1);
  }
  SECTION("lab semantics agree with matrix semantics for shift-only schedules") {
    GateSchedule s;
    s.stages.push_back(ShiftStage{0.77, design(d, 0.77, FreeSymmetric{})});
    std::mt19937_64 rng(28);
    for (int i = 0; i < 20; ++i) {
      const QubitState psi = random_state(rng);
      CHECK(state_fidelity(simulate_schedule(s, psi), apply_schedule_lab(s, psi)) ==
            Approx(1.0).margin(1e-12));
    }
  }
}
