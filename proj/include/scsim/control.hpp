/*
 * Copyright (c) 2026 the scsim authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <string>
#include <vector>

#include "scsim/bank.hpp"

namespace scsim {

// --- charge/discharge gate --------------------------------------------

/// Voltage thresholds and per-cell current limits of the charge control.
struct GateParams {
  double u_ch_max = 0.0;    // stop charging at/above this voltage [V]
  double u_ch_start = 0.0;  // re-enable charging at/below [V]
  double u_dch_min = 0.0;   // stop discharging at/below [V]
  double u_dch_start = 0.0; // re-enable discharging at/above [V]
  double i_ch_max = 0.0;    // max per-cell charge current [A]
  double i_dch_max = 0.0;   // max per-cell discharge current [A]
};

std::vector<std::string> validate(const GateParams& p);

struct GateState {
  bool charge_enabled = true;
  bool discharge_enabled = true;
};

/// Hysteresis update on the measured (terminal) cell voltage.
GateState gate_step(const GateParams& p, GateState s, double u_cell);

/// Zero a request whose direction is disabled, otherwise clamp to the
/// per-cell current limits. Positive current = charging.
double apply_gate(const GateParams& p, const GateState& s, double i_request);

/// Result of the DC current calculation.
struct DcCurrent {
  double i_cell = 0.0;
  bool saturated = false;  // string-voltage guard tripped, output forced 0
};

/// Per-cell DC current for a requested DC power (positive = charging),
/// using the last measured string voltage; gated and clamped. Works in
/// SI units.
DcCurrent dc_current(const BankConfig& cfg, double p_dc, double u_string_meas,
                     const GateParams& gate, const GateState& gs);

// --- PQ control ---------------------------------------------------------

enum class QMode { ReactivePower, TerminalVoltage };

struct PQParams {
  double kp_d = 1.0;   // active-power PI gains [p.u.]
  double ki_d = 0.0;
  double kp_q = 1.0;   // reactive/voltage PI gains [p.u.]
  double ki_q = 0.0;
  double tau_c = 0.05; // measurement/control lag [s]
  double i_max = 1.1;  // converter current magnitude limit [p.u.]
  QMode q_mode = QMode::ReactivePower;
};

std::vector<std::string> validate(const PQParams& p);

struct PQState {
  double integ_d = 0.0;
  double integ_q = 0.0;
  double p_meas = 0.0;  // lag-filtered active power [p.u.]
  double q_meas = 0.0;  // lag-filtered reactive power (or voltage) [p.u.]
};

struct PQOutput {
  double i_d0 = 0.0;
  double i_q0 = 0.0;
};

/// Conditional-integration rate for a PI integrator clamped to |limit|.
/// Frozen when downstream limiting was active on the previous step.
double pi_integrator_rate(double integ, double error, double ki, double limit,
                          bool freeze);

/// Raw PI outputs from the current state (no state change).
PQOutput pq_output(const PQParams& p, const PQState& s, double p_ref,
                   double q_ref);

/// Advance the measurement lags and integrators by dt (one RK4 substep
/// over the continuous laws, inputs held constant) and return the raw
/// axis currents at the new state.
PQOutput pq_step(const PQParams& p, PQState& s, double p_ref, double q_ref,
                 double p_act, double q_act, double dt, bool freeze_d = false,
                 bool freeze_q = false);

// --- LVRT and current limiting -------------------------------------------

struct LvrtParams {
  double v_enter = 0.9;  // enter LVRT below this AC voltage [p.u.]
  double v_exit = 0.95;  // leave LVRT above this AC voltage [p.u.]
  double k_q = 2.0;      // reactive current per unit voltage depression
  double v_ref = 0.9;    // voltage reference of the reactive boost [p.u.]
};

std::vector<std::string> validate(const LvrtParams& p);

struct LvrtResult {
  double i_d = 0.0;
  double i_q = 0.0;
  bool in_lvrt = false;
};

/// Hysteresis entry/exit plus current limiting. In LVRT the reactive
/// current takes priority and the active current gets the remaining
/// headroom; outside LVRT the (i_d0, i_q0) pair is magnitude-limited
/// preserving its angle.
LvrtResult lvrt_limit(const LvrtParams& p, double i_max, double i_d0,
                      double i_q0, double v_ac, bool in_lvrt);

// --- grid frequency control ------------------------------------------------

struct FreqCtrlParams {
  double k_vir = 0.0;    // virtual-inertia gain [p.u.*s]
  double tau_w_i = 1.0;  // inertial washout time constant [s]
  double k_qd = 0.0;     // quasi-droop gain [p.u.]
  double tau_w_d = 30.0; // droop washout time constant [s]
  double tau_pll = 0.02; // PLL frequency-measurement lag [s]
  double deadband = 0.0; // frequency deadband [p.u.]
};

std::vector<std::string> validate(const FreqCtrlParams& p);

struct FreqCtrlState {
  double washout_vir = 0.0;
  double washout_qd = 0.0;
  double f_meas = 1.0;  // lagged frequency [p.u.]
};

double apply_deadband(double delta_f, double deadband);

/// VIR branch output K_vir * s/(tau_w_i*s + 1) applied to the deadbanded
/// frequency deviation, evaluated at the current state.
double vir_output(const FreqCtrlParams& p, const FreqCtrlState& s);

/// Quasi-droop branch output K_qd * tau_w_d*s/(tau_w_d*s + 1): responds
/// with K_qd*delta_f to a step, then washes out.
double quasi_droop_output(const FreqCtrlParams& p, const FreqCtrlState& s);

/// Power set-point change: -(VIR + quasi-droop), saturated to +-1 p.u.
/// of the bank rating.
double freq_ctrl_output(const FreqCtrlParams& p, const FreqCtrlState& s);

/// Advance the PLL lag and washout states by dt (RK4 substep, grid
/// frequency held constant) and return the set-point change at the new
/// state.
double freq_ctrl_step(const FreqCtrlParams& p, FreqCtrlState& s, double f_grid,
                      double dt);

}  // namespace scsim
