/*
 * Copyright (c) 2026 the scsim authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "scsim/control.hpp"

using namespace scsim;

namespace {

GateParams appendix_gate() { return {2.71, 2.4, 1.1, 1.4, 615.0, 615.0}; }

BankConfig appendix_bank() {
  BankConfig cfg;
  cfg.n_s = 370;
  cfg.n_p = 400;
  cfg.p_rated = 100e6;
  cfg.cell = {600, 150, 0.25e-3, 0.5e-3, 1, 2.7, {}, {}, {}};
  return cfg;
}

}  // namespace

TEST_CASE("gate hysteresis on the charge side") {
  const auto p = appendix_gate();
  GateState s;
  s = gate_step(p, s, 2.72);
  CHECK_FALSE(s.charge_enabled);
  s = gate_step(p, s, 2.5);  // inside the hysteresis band: still off
  CHECK_FALSE(s.charge_enabled);
  s = gate_step(p, s, 2.40);
  CHECK(s.charge_enabled);
}

TEST_CASE("gate hysteresis on the discharge side") {
  const auto p = appendix_gate();
  GateState s;
  s = gate_step(p, s, 1.05);
  CHECK_FALSE(s.discharge_enabled);
  s = gate_step(p, s, 1.39);
  CHECK_FALSE(s.discharge_enabled);
  s = gate_step(p, s, 1.40);
  CHECK(s.discharge_enabled);
}

TEST_CASE("gate reachability over a synthetic voltage sweep") {
  const auto p = appendix_gate();
  GateState s;
  double u = 2.0;
  // up-down sweep; the flags must always agree with the last crossed
  // threshold
  bool expect_ch = true, expect_dch = true;
  for (int k = 0; k < 4000; ++k) {
    u = 2.0 + 1.0 * std::sin(k * 0.01) - 0.3 * std::sin(k * 0.0031);
    s = gate_step(p, s, u);
    if (u >= p.u_ch_max) expect_ch = false;
    if (u <= p.u_ch_start) expect_ch = true;
    if (u <= p.u_dch_min) expect_dch = false;
    if (u >= p.u_dch_start) expect_dch = true;
    CHECK(s.charge_enabled == expect_ch);
    CHECK(s.discharge_enabled == expect_dch);
    if (!s.charge_enabled) CHECK(apply_gate(p, s, 100.0) == 0.0);
    if (!s.discharge_enabled) CHECK(apply_gate(p, s, -100.0) == 0.0);
  }
}

TEST_CASE("gate clamps and blocks current requests") {
  const auto p = appendix_gate();
  GateState s;
  CHECK(apply_gate(p, s, 700.0) == doctest::Approx(615.0));
  CHECK(apply_gate(p, s, -200.0) == doctest::Approx(-200.0));
  CHECK(apply_gate(p, s, -900.0) == doctest::Approx(-615.0));
  s.discharge_enabled = false;
  CHECK(apply_gate(p, s, -300.0) == 0.0);
  CHECK(apply_gate(p, s, 300.0) == doctest::Approx(300.0));
}

TEST_CASE("dc current from inverter power") {
  const auto bank = appendix_bank();
  const auto gate = appendix_gate();
  GateState gs;

  const DcCurrent a = dc_current(bank, -100e6, 999.0, gate, gs);
  CHECK(a.i_cell == doctest::Approx(-250.25).epsilon(1e-3));
  CHECK_FALSE(a.saturated);

  CHECK(dc_current(bank, 0.0, 999.0, gate, gs).i_cell == 0.0);

  const DcCurrent c = dc_current(bank, -100e6, 370.0 * 1.05, gate, gs);
  CHECK(c.i_cell == doctest::Approx(-615.0));  // raw -643.5 A clamped

  const DcCurrent guard = dc_current(bank, -100e6, 0.5, gate, gs);
  CHECK(guard.i_cell == 0.0);
  CHECK(guard.saturated);
}

TEST_CASE("dc current never contradicts the gate flags") {
  const auto bank = appendix_bank();
  const auto gate = appendix_gate();
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> power(-150e6, 150e6);
  std::uniform_real_distribution<double> voltage(0.0, 1100.0);
  std::bernoulli_distribution flag(0.5);
  for (int it = 0; it < 2000; ++it) {
    GateState gs{flag(rng), flag(rng)};
    const DcCurrent dc =
        dc_current(bank, power(rng), voltage(rng), gate, gs);
    if (dc.i_cell > 0.0) CHECK(gs.charge_enabled);
    if (dc.i_cell < 0.0) CHECK(gs.discharge_enabled);
    CHECK(dc.i_cell <= gate.i_ch_max);
    CHECK(dc.i_cell >= -gate.i_dch_max);
  }
}

TEST_CASE("pq loop tracks reachable references with zero error") {
  PQParams p;
  p.ki_d = p.ki_q = 100.0;
  PQState s;
  const double dt = 1e-3;
  double i_d = 0.0, i_q = 0.0;
  for (int k = 0; k < 2000; ++k) {  // 2 s = 40 * tau_c
    const double v_ac = 1.0;
    const auto out = pq_step(p, s, 0.5, 0.0, v_ac * i_d, v_ac * i_q, dt);
    i_d = out.i_d0;
    i_q = out.i_q0;
  }
  CHECK(std::abs(0.5 - s.p_meas) < 1e-3);
  CHECK(i_d == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(std::abs(i_q) < 1e-6);

  // converged loop: zero error freezes the outputs
  const auto out = pq_step(p, s, 0.5, 0.0, 0.5, 0.0, dt);
  CHECK(out.i_d0 == doctest::Approx(i_d).epsilon(1e-6));
}

TEST_CASE("pq integrators stay clamped and can be frozen") {
  PQParams p;
  p.ki_d = 100.0;
  p.i_max = 1.1;
  PQState s;
  for (int k = 0; k < 5000; ++k)
    pq_step(p, s, 5.0, 0.0, 0.0, 0.0, 1e-3);  // unreachable reference
  CHECK(s.integ_d <= p.i_max + 1e-12);

  PQState frozen = s;
  pq_step(p, frozen, 5.0, 0.0, 0.0, 0.0, 1e-3, /*freeze_d=*/true);
  CHECK(frozen.integ_d == s.integ_d);
}

TEST_CASE("lvrt reactive priority and hysteresis") {
  LvrtParams p;  // 0.9 / 0.95 / 2.0 / 0.9
  const double i_max = 1.1;

  auto r = lvrt_limit(p, i_max, 1.0, 0.0, 0.6, false);
  CHECK(r.in_lvrt);
  CHECK(r.i_q == doctest::Approx(0.6));
  CHECK(r.i_d <= std::sqrt(i_max * i_max - 0.36) + 1e-12);
  CHECK(r.i_d == doctest::Approx(std::sqrt(0.85)).epsilon(1e-6));

  r = lvrt_limit(p, i_max, 0.4, 0.0, 0.2, false);
  CHECK(r.i_q == doctest::Approx(1.1));  // saturated reactive priority
  CHECK(r.i_d == doctest::Approx(0.0));

  // passthrough outside LVRT
  r = lvrt_limit(p, i_max, 0.3, 0.2, 1.0, false);
  CHECK_FALSE(r.in_lvrt);
  CHECK(r.i_d == doctest::Approx(0.3));
  CHECK(r.i_q == doctest::Approx(0.2));

  // hysteresis: stay in LVRT until v_ac > v_exit
  r = lvrt_limit(p, i_max, 0.3, 0.2, 0.93, true);
  CHECK(r.in_lvrt);
  r = lvrt_limit(p, i_max, 0.3, 0.2, 0.96, true);
  CHECK_FALSE(r.in_lvrt);
}

TEST_CASE("current limit circle holds for random inputs") {
  LvrtParams p;
  const double i_max = 1.1;
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> cur(-3.0, 3.0);
  std::uniform_real_distribution<double> volt(0.0, 1.2);
  bool in = false;
  for (int it = 0; it < 5000; ++it) {
    const auto r = lvrt_limit(p, i_max, cur(rng), cur(rng), volt(rng), in);
    in = r.in_lvrt;
    CHECK(r.i_d * r.i_d + r.i_q * r.i_q <= i_max * i_max + 1e-12);
  }
}

TEST_CASE("quasi-droop responds like droop then washes out") {
  FreqCtrlParams p;
  p.k_qd = 150.0;
  p.k_vir = 0.0;
  p.tau_w_d = 30.0;
  FreqCtrlState s;
  s.f_meas = 0.998;  // step already through the PLL; lag stays pinned

  const double dt = 1e-3;
  double t = 0.0;
  for (int k = 0; k < 20000; ++k) {
    const double out = freq_ctrl_step(p, s, 0.998, dt);
    t += dt;
    const double expected = 0.3 * std::exp(-t / 30.0);
    REQUIRE(std::abs(out - expected) < 1e-6);
  }
}

TEST_CASE("virtual inertia converges to gain times ramp slope") {
  FreqCtrlParams p;
  p.k_vir = 100.0;
  p.k_qd = 0.0;
  p.tau_w_i = 1.0;
  FreqCtrlState s;

  // the PLL lag only delays a ramp; the filtered-derivative limit is
  // unchanged
  const double slope = -0.001;  // p.u./s
  const double dt = 1e-3;
  double out = 0.0;
  for (int k = 0; k < 8000; ++k) {  // 8 s = 8 washout time constants
    const double f = 1.0 + slope * (k + 1) * dt;
    out = freq_ctrl_step(p, s, f, dt);
  }
  CHECK(out == doctest::Approx(0.1).epsilon(2e-3));
}

TEST_CASE("washout branches decay below 1e-6 within 10 time constants") {
  FreqCtrlParams p;
  p.k_vir = 1.0;
  p.k_qd = 1.0;
  p.tau_w_i = 1.0;
  p.tau_w_d = 30.0;
  p.tau_pll = 0.02;
  FreqCtrlState s;
  const double dt = 5e-3;
  const double t_end = 10.0 * p.tau_w_d;
  for (double t = 0.0; t < t_end; t += dt)
    freq_ctrl_step(p, s, 0.998, dt);
  CHECK(std::abs(vir_output(p, s)) < 1e-6);
  CHECK(std::abs(quasi_droop_output(p, s)) < 1e-6);
}

TEST_CASE("frequency controller output saturates at one per unit") {
  FreqCtrlParams p;
  p.k_qd = 150.0;
  FreqCtrlState s;
  s.f_meas = 0.98;  // -2% frequency: raw request 3 p.u.
  CHECK(freq_ctrl_output(p, s) == doctest::Approx(1.0));
  s.f_meas = 1.02;
  CHECK(freq_ctrl_output(p, s) == doctest::Approx(-1.0));
}

TEST_CASE("deadband suppresses small deviations") {
  CHECK(apply_deadband(0.0005, 0.001) == 0.0);
  CHECK(apply_deadband(-0.003, 0.001) == doctest::Approx(-0.002));
  CHECK(apply_deadband(0.003, 0.0) == doctest::Approx(0.003));
}

TEST_CASE("parameter validation") {
  GateParams g{2.4, 2.71, 1.4, 1.1, 615.0, 615.0};  // both pairs swapped
  CHECK(validate(g).size() == 2);

  FreqCtrlParams f;
  f.k_vir = 100.0;
  f.k_qd = 150.0;
  f.tau_w_i = 1.0;
  f.tau_w_d = 5.0;  // too close to the inertial washout
  auto issues = validate(f);
  REQUIRE(issues.size() == 1);
  CHECK(issues[0].find("tau_w_d") != std::string::npos);

  PQParams pq;
  pq.tau_c = 0.0;
  CHECK(validate(pq).size() == 1);

  LvrtParams lv;
  lv.v_enter = 0.96;  // above v_exit
  CHECK(validate(lv).size() == 2);
}
