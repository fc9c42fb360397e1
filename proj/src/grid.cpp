/*
 * Copyright (c) 2026 the scsim authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "scsim/grid.hpp"

#include <algorithm>
#include <stdexcept>

namespace scsim {

std::vector<std::string> validate(const SfrParams& p) {
  std::vector<std::string> issues;
  if (!(p.f_nom > 0.0)) issues.push_back("f_nom must be > 0");
  if (!(p.h > 0.0)) issues.push_back("h must be > 0");
  if (p.d < 0.0) issues.push_back("d must be >= 0");
  if (!(p.r > 0.0)) issues.push_back("r must be > 0");
  if (!(p.tau_g > 0.0)) issues.push_back("tau_g must be > 0");
  if (!(p.tau_r > 0.0)) issues.push_back("tau_r must be > 0");
  if (p.k_r < 0.0 || p.k_r > 1.0) issues.push_back("k_r must be in [0, 1]");
  if (!(p.s_base > 0.0)) issues.push_back("s_base must be > 0");
  return issues;
}

double mech_power(const SfrParams& p, const GridState& s) {
  return p.k_r * s.x_gov + (1.0 - p.k_r) * s.x_reheat;
}

GridState sfr_derivatives(const SfrParams& p, const GridState& s, double p_sc,
                          double p_dist) {
  GridState d;
  d.delta_f =
      (mech_power(p, s) + p_sc - p_dist - p.d * s.delta_f) / (2.0 * p.h);
  d.x_gov = (-s.delta_f / p.r - s.x_gov) / p.tau_g;
  d.x_reheat = (s.x_gov - s.x_reheat) / p.tau_r;
  return d;
}

std::vector<std::string> validate(const Disturbance& d) {
  std::vector<std::string> issues;
  if (d.t_start < 0.0) issues.push_back("t_start must be >= 0");
  if (d.kind == DisturbanceKind::VoltageDip) {
    if (!(d.magnitude > 0.0 && d.magnitude < 1.0))
      issues.push_back("dip depth must be in (0, 1)");
    if (!(d.duration > 0.0)) issues.push_back("duration must be > 0");
  }
  return issues;
}

double voltage_profile(const Disturbance& d, double t) {
  if (d.kind != DisturbanceKind::VoltageDip)
    throw std::domain_error("voltage_profile: not a voltage-dip disturbance");
  if (t >= d.t_start && t < d.t_start + d.duration) return 1.0 - d.magnitude;
  return 1.0;
}

double power_disturbance(std::span<const Disturbance> ds, double t) {
  double p = 0.0;
  for (const auto& d : ds) {
    switch (d.kind) {
      case DisturbanceKind::LossOfGeneration:
      case DisturbanceKind::LoadStep:
        if (t >= d.t_start) p += d.magnitude;
        break;
      case DisturbanceKind::VoltageDip:
        if (t >= d.t_start && t < d.t_start + d.duration) p -= d.accel_pu;
        break;
    }
  }
  return p;
}

double bus_voltage(std::span<const Disturbance> ds, double t) {
  double v = 1.0;
  for (const auto& d : ds)
    if (d.kind == DisturbanceKind::VoltageDip)
      v = std::min(v, voltage_profile(d, t));
  return v;
}

const char* to_string(DisturbanceKind k) {
  switch (k) {
    case DisturbanceKind::LossOfGeneration: return "loss-of-generation";
    case DisturbanceKind::LoadStep: return "load-step";
    case DisturbanceKind::VoltageDip: return "voltage-dip";
  }
  return "?";
}

bool disturbance_kind_from_string(const std::string& name,
                                  DisturbanceKind& out) {
  if (name == "loss-of-generation") out = DisturbanceKind::LossOfGeneration;
  else if (name == "load-step") out = DisturbanceKind::LoadStep;
  else if (name == "voltage-dip") out = DisturbanceKind::VoltageDip;
  else return false;
  return true;
}

}  // namespace scsim
