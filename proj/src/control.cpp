/*
 * Copyright (c) 2026 the scsim authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "scsim/control.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Core>

#include "scsim/integrator.hpp"

namespace scsim {

namespace {
// Strings measured below this are treated as a sensing fault.
constexpr double kStringVoltageEps = 1.0;  // [V]
}  // namespace

std::vector<std::string> validate(const GateParams& p) {
  std::vector<std::string> issues;
  if (!(p.u_dch_min < p.u_dch_start))
    issues.push_back("u_dch_min must be < u_dch_start");
  if (!(p.u_dch_start < p.u_ch_start))
    issues.push_back("u_dch_start must be < u_ch_start");
  if (!(p.u_ch_start < p.u_ch_max))
    issues.push_back("u_ch_start must be < u_ch_max");
  if (!(p.i_ch_max > 0.0)) issues.push_back("i_ch_max must be > 0");
  if (!(p.i_dch_max > 0.0)) issues.push_back("i_dch_max must be > 0");
  return issues;
}

GateState gate_step(const GateParams& p, GateState s, double u_cell) {
  if (u_cell >= p.u_ch_max)
    s.charge_enabled = false;
  else if (u_cell <= p.u_ch_start)
    s.charge_enabled = true;
  if (u_cell <= p.u_dch_min)
    s.discharge_enabled = false;
  else if (u_cell >= p.u_dch_start)
    s.discharge_enabled = true;
  return s;
}

double apply_gate(const GateParams& p, const GateState& s, double i_request) {
  if (i_request > 0.0 && !s.charge_enabled) return 0.0;
  if (i_request < 0.0 && !s.discharge_enabled) return 0.0;
  return std::clamp(i_request, -p.i_dch_max, p.i_ch_max);
}

DcCurrent dc_current(const BankConfig& cfg, double p_dc, double u_string_meas,
                     const GateParams& gate, const GateState& gs) {
  if (u_string_meas <= kStringVoltageEps) return {0.0, true};
  const double raw = p_dc / (cfg.n_p * u_string_meas);
  return {apply_gate(gate, gs, raw), false};
}

std::vector<std::string> validate(const PQParams& p) {
  std::vector<std::string> issues;
  if (p.kp_d < 0.0 || p.ki_d < 0.0 || p.kp_q < 0.0 || p.ki_q < 0.0)
    issues.push_back("PI gains must be >= 0");
  if (!(p.tau_c > 0.0)) issues.push_back("tau_c must be > 0");
  if (!(p.i_max > 0.0)) issues.push_back("i_max must be > 0");
  return issues;
}

double pi_integrator_rate(double integ, double error, double ki, double limit,
                          bool freeze) {
  if (freeze) return 0.0;
  const double rate = ki * error;
  if (integ >= limit && rate > 0.0) return 0.0;
  if (integ <= -limit && rate < 0.0) return 0.0;
  return rate;
}

PQOutput pq_output(const PQParams& p, const PQState& s, double p_ref,
                   double q_ref) {
  return {p.kp_d * (p_ref - s.p_meas) + s.integ_d,
          p.kp_q * (q_ref - s.q_meas) + s.integ_q};
}

PQOutput pq_step(const PQParams& p, PQState& s, double p_ref, double q_ref,
                 double p_act, double q_act, double dt, bool freeze_d,
                 bool freeze_q) {
  Eigen::Vector4d x(s.p_meas, s.q_meas, s.integ_d, s.integ_q);
  auto f = [&](double, const Eigen::Vector4d& v) {
    return Eigen::Vector4d(
        (p_act - v[0]) / p.tau_c, (q_act - v[1]) / p.tau_c,
        pi_integrator_rate(v[2], p_ref - v[0], p.ki_d, p.i_max, freeze_d),
        pi_integrator_rate(v[3], q_ref - v[1], p.ki_q, p.i_max, freeze_q));
  };
  x = rk4_step(f, 0.0, x, dt);
  s.p_meas = x[0];
  s.q_meas = x[1];
  // the rate gating alone can overshoot within one step; the integrator
  // state itself stays clamped
  s.integ_d = std::clamp(x[2], -p.i_max, p.i_max);
  s.integ_q = std::clamp(x[3], -p.i_max, p.i_max);
  return pq_output(p, s, p_ref, q_ref);
}

std::vector<std::string> validate(const LvrtParams& p) {
  std::vector<std::string> issues;
  if (!(p.v_enter < p.v_exit)) issues.push_back("v_enter must be < v_exit");
  if (!(p.v_enter <= p.v_ref)) issues.push_back("v_enter must be <= v_ref");
  if (p.k_q < 0.0) issues.push_back("k_q must be >= 0");
  return issues;
}

LvrtResult lvrt_limit(const LvrtParams& p, double i_max, double i_d0,
                      double i_q0, double v_ac, bool in_lvrt) {
  const bool now = in_lvrt ? !(v_ac > p.v_exit) : (v_ac < p.v_enter);
  if (now) {
    const double i_q = std::clamp(p.k_q * (p.v_ref - v_ac), 0.0, i_max);
    const double headroom = std::sqrt(std::max(0.0, i_max * i_max - i_q * i_q));
    return {std::clamp(i_d0, -headroom, headroom), i_q, true};
  }
  const double mag = std::hypot(i_d0, i_q0);
  if (mag > i_max) {
    const double scale = i_max / mag;
    return {i_d0 * scale, i_q0 * scale, false};
  }
  return {i_d0, i_q0, false};
}

std::vector<std::string> validate(const FreqCtrlParams& p) {
  std::vector<std::string> issues;
  if (p.k_vir < 0.0 || p.k_qd < 0.0) issues.push_back("gains must be >= 0");
  if (!(p.tau_w_i > 0.0)) issues.push_back("tau_w_i must be > 0");
  if (!(p.tau_w_d > 0.0)) issues.push_back("tau_w_d must be > 0");
  if (!(p.tau_pll > 0.0)) issues.push_back("tau_pll must be > 0");
  if (p.deadband < 0.0) issues.push_back("deadband must be >= 0");
  if (p.k_vir > 0.0 && p.k_qd > 0.0 && p.tau_w_d < 10.0 * p.tau_w_i)
    issues.push_back(
        "tau_w_d must be >= 10*tau_w_i when both frequency loops are active");
  return issues;
}

double apply_deadband(double delta_f, double deadband) {
  if (std::abs(delta_f) <= deadband) return 0.0;
  return delta_f - std::copysign(deadband, delta_f);
}

double vir_output(const FreqCtrlParams& p, const FreqCtrlState& s) {
  const double df = apply_deadband(s.f_meas - 1.0, p.deadband);
  return p.k_vir * (df - s.washout_vir) / p.tau_w_i;
}

double quasi_droop_output(const FreqCtrlParams& p, const FreqCtrlState& s) {
  const double df = apply_deadband(s.f_meas - 1.0, p.deadband);
  return p.k_qd * (df - s.washout_qd);
}

double freq_ctrl_output(const FreqCtrlParams& p, const FreqCtrlState& s) {
  return std::clamp(-(vir_output(p, s) + quasi_droop_output(p, s)), -1.0, 1.0);
}

double freq_ctrl_step(const FreqCtrlParams& p, FreqCtrlState& s, double f_grid,
                      double dt) {
  Eigen::Vector3d x(s.f_meas, s.washout_vir, s.washout_qd);
  auto f = [&](double, const Eigen::Vector3d& v) {
    const double df = apply_deadband(v[0] - 1.0, p.deadband);
    return Eigen::Vector3d((f_grid - v[0]) / p.tau_pll,
                           (df - v[1]) / p.tau_w_i, (df - v[2]) / p.tau_w_d);
  };
  x = rk4_step(f, 0.0, x, dt);
  s.f_meas = x[0];
  s.washout_vir = x[1];
  s.washout_qd = x[2];
  return freq_ctrl_output(p, s);
}

}  // namespace scsim
