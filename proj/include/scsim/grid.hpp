/*
 * Copyright (c) 2026 the scsim authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <span>
#include <string>
#include <vector>

namespace scsim {

/// Aggregate system-frequency-response model: single rotating mass with
/// load damping and a reheat steam governor.
struct SfrParams {
  double f_nom = 60.0;   // nominal frequency [Hz]
  double h = 4.0;        // aggregate inertia constant [s]
  double d = 1.0;        // load damping [p.u./p.u.]
  double r = 0.05;       // governor droop [p.u.]
  double tau_g = 0.2;    // governor time constant [s]
  double tau_r = 7.0;    // reheat time constant [s]
  double k_r = 0.3;      // reheat (high-pressure) fraction
  double s_base = 0.0;   // system base power [VA]
};

std::vector<std::string> validate(const SfrParams& p);

struct GridState {
  double delta_f = 0.0;   // frequency deviation [p.u.]
  double x_gov = 0.0;     // governor lag state [p.u.]
  double x_reheat = 0.0;  // reheat lag state [p.u.]
};

/// Mechanical power deviation seen by the swing mass [p.u.].
double mech_power(const SfrParams& p, const GridState& s);

/// Swing + governor derivatives. p_sc is the SC injection and p_dist
/// the active-power deficit, both p.u. on s_base.
GridState sfr_derivatives(const SfrParams& p, const GridState& s, double p_sc,
                          double p_dist);

enum class DisturbanceKind { LossOfGeneration, LoadStep, VoltageDip };

struct Disturbance {
  DisturbanceKind kind = DisturbanceKind::LossOfGeneration;
  double t_start = 0.0;   // [s]
  double magnitude = 0.0; // power deficit [p.u. on s_base] or dip depth [p.u.]
  double duration = 0.0;  // dip duration [s]; voltage kind only
  double accel_pu = 0.0;  // accelerating power during the dip [p.u. on s_base]
};

std::vector<std::string> validate(const Disturbance& d);

/// Bus voltage produced by one voltage-dip disturbance: 1 - depth inside
/// [t_start, t_start + duration), 1 elsewhere. Throws std::domain_error
/// for other kinds.
double voltage_profile(const Disturbance& d, double t);

/// Net active-power deficit at time t (sum over power disturbances,
/// minus the accelerating power of in-window dips).
double power_disturbance(std::span<const Disturbance> ds, double t);

/// Bus voltage at time t: deepest dip wins, 1.0 baseline.
double bus_voltage(std::span<const Disturbance> ds, double t);

const char* to_string(DisturbanceKind k);
bool disturbance_kind_from_string(const std::string& name, DisturbanceKind& out);

}  // namespace scsim
