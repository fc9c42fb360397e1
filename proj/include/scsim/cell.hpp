/*
 * Copyright (c) 2026 the scsim authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <Eigen/Core>

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace scsim {

/// Linear tau(u) law; overrides the 3*C*(rdc-rs) datasheet approximation
/// when supplied.
struct LinearTau {
  double tau0 = 0.0;   // [s]
  double k_tau = 0.0;  // [s/V]
};

/// One slow recombination branch: series R-C across the cell terminals.
struct SlowBranch {
  double r = 0.0;  // [Ohm]
  double c = 0.0;  // [F]
};

/// Electrical constants of a supercapacitor cell.
///
/// The fast branch is a series resistance rs, a voltage-dependent main
/// capacitor C(u) = c0 + kv*u and n_groups parallel RC groups in series.
/// Optional slow branches and a leak resistance sit in parallel across
/// the terminals.
struct CellParams {
  double c0 = 0.0;       // capacitance at 0 V [F]
  double kv = 0.0;       // capacitance slope [F/V]
  double rs = 0.0;       // high-frequency series resistance [Ohm]
  double rdc = 0.0;      // DC resistance [Ohm]
  int n_groups = 1;      // parallel RC groups in the fast branch, 0..5
  double u_rated = 0.0;  // rated cell voltage [V]
  std::vector<SlowBranch> slow_branches;
  std::optional<double> leak_resistance;  // [Ohm]
  std::optional<LinearTau> tau_law;
};

/// Violated invariants, empty when valid.
std::vector<std::string> validate(const CellParams& p);

/// ODE state of one cell. Vector lengths must match the parameter set.
struct CellState {
  double u_c = 0.0;          // main capacitor voltage [V]
  Eigen::VectorXd u_groups;  // RC-group voltages [V]
  Eigen::VectorXd u_slow;    // slow-branch capacitor voltages [V]
};

enum class IdealVariant { AtZeroVolts, AtHalfRated, AtRated };

/// Constant-capacitance stand-in for a cell; no series resistance, no
/// RC groups. `variant` records how c was derived.
struct IdealCellParams {
  double c = 0.0;        // [F]
  double u_rated = 0.0;  // [V]
  IdealVariant variant = IdealVariant::AtHalfRated;
};

/// Either the nonlinear cell or an ideal-capacitor reduction of it.
using CellModel = std::variant<CellParams, IdealCellParams>;

// --- nonlinear cell --------------------------------------------------

/// C(u) = c0 + kv*u. Throws std::domain_error for u < 0.
double capacitance(const CellParams& p, double u);

/// Group time parameter tau(u); 3*C(u)*(rdc - rs) unless a linear law
/// is configured. Zero when rdc == rs.
double tau_of_voltage(const CellParams& p, double u);

struct GroupParams {
  double r = 0.0;  // [Ohm]
  double c = 0.0;  // [F]
};

/// Parameters of RC group k (1-based): R_k = 2*tau/(k^2*pi^2*C),
/// C_k = C/2. Throws std::out_of_range for k outside [1, n_groups].
GroupParams group_params(const CellParams& p, double u, int k);

/// State derivative for terminal current i (positive = charging).
/// Group parameters are re-evaluated at the instantaneous u_c; slow
/// branches are driven by the terminal voltage and, together with the
/// leak, divert current from the fast branch.
CellState cell_derivatives(const CellParams& p, const CellState& s, double i);

/// u_sc = i*rs + u_c + sum(u_Ck). Slow branches add no series term.
double terminal_voltage(const CellParams& p, const CellState& s, double i);

/// Integral of v*C(v) from 0 to u: c0*u^2/2 + kv*u^3/3 [J].
double stored_energy(const CellParams& p, double u);

/// Integral of C(v) from 0 to u: c0*u + kv*u^2/2 [C].
double stored_charge(const CellParams& p, double u);

struct Soc {
  double value = 0.0;
  bool clamped = false;  // u was above rated and the ratio was clamped to 1
};

/// Energy-based state of charge: stored_energy(u)/stored_energy(u_rated).
Soc soc(const CellParams& p, double u);

/// Derive the ideal-capacitor reduction with C fixed at 0 V, half rated
/// or rated voltage.
IdealCellParams ideal_from(const CellParams& p, IdealVariant variant);

// --- ideal cell ------------------------------------------------------

double capacitance(const IdealCellParams& p, double u);
double stored_energy(const IdealCellParams& p, double u);
double stored_charge(const IdealCellParams& p, double u);
Soc soc(const IdealCellParams& p, double u);
CellState cell_derivatives(const IdealCellParams& p, const CellState& s, double i);
double terminal_voltage(const IdealCellParams& p, const CellState& s, double i);

// --- model dispatch --------------------------------------------------

double capacitance(const CellModel& m, double u);
double stored_energy(const CellModel& m, double u);
Soc soc(const CellModel& m, double u);
CellState cell_derivatives(const CellModel& m, const CellState& s, double i);
double terminal_voltage(const CellModel& m, const CellState& s, double i);

/// Number of ODE states (1 + groups + slow branches; 1 for ideal).
int cell_state_size(const CellModel& m);

/// Rest state at open-circuit voltage u0: groups at 0, slow branches
/// charged to u0.
CellState initial_cell_state(const CellModel& m, double u0);

Eigen::VectorXd to_vector(const CellState& s);
CellState cell_state_from_vector(const CellModel& m, const Eigen::VectorXd& x);

/// Voltage whose energy-based SoC equals `target` (bisection on the
/// monotone energy ratio). target in [0, 1].
double voltage_for_soc(const CellParams& p, double target);
double voltage_for_soc(const IdealCellParams& p, double target);

const char* to_string(IdealVariant v);

}  // namespace scsim
