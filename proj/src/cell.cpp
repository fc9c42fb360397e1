/*
 * Copyright (c) 2026 the scsim authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "scsim/cell.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace scsim {

namespace {

// Below this tau the groups are treated as short-circuited (rdc == rs).
constexpr double kTauCollapse = 1e-12;

void require_nonnegative_voltage(double u, const char* what) {
  if (u < 0.0) {
    throw std::domain_error(std::string(what) + ": negative voltage " +
                            std::to_string(u));
  }
}

}  // namespace

std::vector<std::string> validate(const CellParams& p) {
  std::vector<std::string> issues;
  if (!(p.c0 > 0.0)) issues.push_back("c0 must be > 0");
  if (p.kv < 0.0) issues.push_back("kv must be >= 0");
  if (!(p.u_rated > 0.0)) issues.push_back("u_rated must be > 0");
  if (p.rs < 0.0) issues.push_back("rs must be >= 0");
  if (p.rdc < p.rs) issues.push_back("rdc must be >= rs");
  if (p.n_groups < 0 || p.n_groups > 5)
    issues.push_back("n_groups must be in [0, 5]");
  for (std::size_t j = 0; j < p.slow_branches.size(); ++j) {
    const auto& b = p.slow_branches[j];
    if (!(b.r > 0.0) || !(b.c > 0.0))
      issues.push_back("slow_branches[" + std::to_string(j) +
                       "]: r and c must be > 0");
  }
  if (p.leak_resistance && !(*p.leak_resistance > 0.0))
    issues.push_back("leak_resistance must be > 0");
  if (p.tau_law && p.tau_law->tau0 < 0.0)
    issues.push_back("tau_law.tau0 must be >= 0");
  return issues;
}

double capacitance(const CellParams& p, double u) {
  require_nonnegative_voltage(u, "capacitance");
  return p.c0 + p.kv * u;
}

double tau_of_voltage(const CellParams& p, double u) {
  require_nonnegative_voltage(u, "tau_of_voltage");
  if (p.tau_law) return p.tau_law->tau0 + p.tau_law->k_tau * u;
  return 3.0 * capacitance(p, u) * (p.rdc - p.rs);
}

GroupParams group_params(const CellParams& p, double u, int k) {
  if (k < 1 || k > p.n_groups)
    throw std::out_of_range("group_params: k = " + std::to_string(k) +
                            " outside [1, " + std::to_string(p.n_groups) + "]");
  const double c_sc = capacitance(p, u);
  const double tau = tau_of_voltage(p, u);
  const double k2 = static_cast<double>(k) * static_cast<double>(k);
  return {2.0 * tau / (k2 * std::numbers::pi * std::numbers::pi * c_sc),
          0.5 * c_sc};
}

double terminal_voltage(const CellParams& p, const CellState& s, double i) {
  return i * p.rs + s.u_c + s.u_groups.sum();
}

CellState cell_derivatives(const CellParams& p, const CellState& s, double i) {
  const double c_sc = capacitance(p, s.u_c);
  const double tau = tau_of_voltage(p, s.u_c);

  CellState d;
  d.u_groups = Eigen::VectorXd::Zero(s.u_groups.size());
  d.u_slow = Eigen::VectorXd::Zero(s.u_slow.size());

  // Parallel branches see the terminal voltage and divert current from
  // the fast branch.
  double i_fast = i;
  if (!p.slow_branches.empty() || p.leak_resistance) {
    const double u_sc = terminal_voltage(p, s, i);
    for (std::size_t j = 0; j < p.slow_branches.size(); ++j) {
      const auto& b = p.slow_branches[j];
      const double i_branch = (u_sc - s.u_slow[static_cast<int>(j)]) / b.r;
      d.u_slow[static_cast<int>(j)] = i_branch / b.c;
      i_fast -= i_branch;
    }
    if (p.leak_resistance) i_fast -= u_sc / *p.leak_resistance;
  }

  d.u_c = i_fast / c_sc;

  const double c_k = 0.5 * c_sc;
  for (int k = 1; k <= static_cast<int>(s.u_groups.size()); ++k) {
    if (tau < kTauCollapse) {
      d.u_groups[k - 1] = 0.0;  // R_k = 0 shorts the group
      continue;
    }
    const double rk_ck = tau / (static_cast<double>(k * k) *
                                std::numbers::pi * std::numbers::pi);
    d.u_groups[k - 1] = -s.u_groups[k - 1] / rk_ck + i_fast / c_k;
  }
  return d;
}

double stored_energy(const CellParams& p, double u) {
  require_nonnegative_voltage(u, "stored_energy");
  return 0.5 * p.c0 * u * u + p.kv * u * u * u / 3.0;
}

double stored_charge(const CellParams& p, double u) {
  require_nonnegative_voltage(u, "stored_charge");
  return p.c0 * u + 0.5 * p.kv * u * u;
}

Soc soc(const CellParams& p, double u) {
  require_nonnegative_voltage(u, "soc");
  if (u > p.u_rated) return {1.0, true};
  return {stored_energy(p, u) / stored_energy(p, p.u_rated), false};
}

IdealCellParams ideal_from(const CellParams& p, IdealVariant variant) {
  double u = 0.0;
  switch (variant) {
    case IdealVariant::AtZeroVolts: u = 0.0; break;
    case IdealVariant::AtHalfRated: u = 0.5 * p.u_rated; break;
    case IdealVariant::AtRated: u = p.u_rated; break;
  }
  return {capacitance(p, u), p.u_rated, variant};
}

double capacitance(const IdealCellParams& p, double u) {
  require_nonnegative_voltage(u, "capacitance");
  return p.c;
}

double stored_energy(const IdealCellParams& p, double u) {
  require_nonnegative_voltage(u, "stored_energy");
  return 0.5 * p.c * u * u;
}

double stored_charge(const IdealCellParams& p, double u) {
  require_nonnegative_voltage(u, "stored_charge");
  return p.c * u;
}

Soc soc(const IdealCellParams& p, double u) {
  require_nonnegative_voltage(u, "soc");
  if (u > p.u_rated) return {1.0, true};
  const double r = u / p.u_rated;
  return {r * r, false};
}

CellState cell_derivatives(const IdealCellParams& p, const CellState& s,
                           double i) {
  (void)s;
  CellState d;
  d.u_c = i / p.c;
  d.u_groups = Eigen::VectorXd::Zero(0);
  d.u_slow = Eigen::VectorXd::Zero(0);
  return d;
}

double terminal_voltage(const IdealCellParams&, const CellState& s, double) {
  return s.u_c;
}

double capacitance(const CellModel& m, double u) {
  return std::visit([u](const auto& p) { return capacitance(p, u); }, m);
}

double stored_energy(const CellModel& m, double u) {
  return std::visit([u](const auto& p) { return stored_energy(p, u); }, m);
}

Soc soc(const CellModel& m, double u) {
  return std::visit([u](const auto& p) { return soc(p, u); }, m);
}

CellState cell_derivatives(const CellModel& m, const CellState& s, double i) {
  return std::visit([&](const auto& p) { return cell_derivatives(p, s, i); }, m);
}

double terminal_voltage(const CellModel& m, const CellState& s, double i) {
  return std::visit([&](const auto& p) { return terminal_voltage(p, s, i); }, m);
}

int cell_state_size(const CellModel& m) {
  if (const auto* p = std::get_if<CellParams>(&m))
    return 1 + p->n_groups + static_cast<int>(p->slow_branches.size());
  return 1;
}

CellState initial_cell_state(const CellModel& m, double u0) {
  CellState s;
  s.u_c = u0;
  if (const auto* p = std::get_if<CellParams>(&m)) {
    s.u_groups = Eigen::VectorXd::Zero(p->n_groups);
    s.u_slow = Eigen::VectorXd::Constant(
        static_cast<int>(p->slow_branches.size()), u0);
  } else {
    s.u_groups = Eigen::VectorXd::Zero(0);
    s.u_slow = Eigen::VectorXd::Zero(0);
  }
  return s;
}

Eigen::VectorXd to_vector(const CellState& s) {
  Eigen::VectorXd x(1 + s.u_groups.size() + s.u_slow.size());
  x[0] = s.u_c;
  x.segment(1, s.u_groups.size()) = s.u_groups;
  x.segment(1 + s.u_groups.size(), s.u_slow.size()) = s.u_slow;
  return x;
}

CellState cell_state_from_vector(const CellModel& m, const Eigen::VectorXd& x) {
  CellState s;
  int ng = 0;
  int ns = 0;
  if (const auto* p = std::get_if<CellParams>(&m)) {
    ng = p->n_groups;
    ns = static_cast<int>(p->slow_branches.size());
  }
  s.u_c = x[0];
  s.u_groups = x.segment(1, ng);
  s.u_slow = x.segment(1 + ng, ns);
  return s;
}

namespace {

template <typename Params>
double bisect_soc(const Params& p, double target) {
  if (target <= 0.0) return 0.0;
  if (target >= 1.0) return p.u_rated;
  double lo = 0.0;
  double hi = p.u_rated;
  for (int it = 0; it < 200 && hi - lo > 1e-12 * p.u_rated; ++it) {
    const double mid = 0.5 * (lo + hi);
    (soc(p, mid).value < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double voltage_for_soc(const CellParams& p, double target) {
  return bisect_soc(p, target);
}

double voltage_for_soc(const IdealCellParams& p, double target) {
  if (target <= 0.0) return 0.0;
  if (target >= 1.0) return p.u_rated;
  return p.u_rated * std::sqrt(target);
}

const char* to_string(IdealVariant v) {
  switch (v) {
    case IdealVariant::AtZeroVolts: return "at-zero-volts";
    case IdealVariant::AtHalfRated: return "at-half-rated";
    case IdealVariant::AtRated: return "at-rated";
  }
  return "?";
}

}  // namespace scsim
