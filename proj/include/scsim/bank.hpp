/*
 * Copyright (c) 2026 the scsim authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <string>
#include <vector>

#include "scsim/cell.hpp"

namespace scsim {

/// A bank of n_s series cells per string and n_p parallel strings, all
/// cells identical and balanced. One CellState represents every cell.
struct BankConfig {
  int n_s = 1;            // series cells per string
  int n_p = 1;            // parallel strings
  double p_rated = 0.0;   // bank rated power [W]
  CellParams cell;
};

std::vector<std::string> validate(const BankConfig& cfg);

/// String (bank DC terminal) voltage for a given cell voltage.
inline double string_voltage(const BankConfig& cfg, double u_cell) {
  return cfg.n_s * u_cell;
}

/// Module (bank DC terminal) current for a given cell current.
inline double module_current(const BankConfig& cfg, double i_cell) {
  return cfg.n_p * i_cell;
}

/// DC power at the bank terminals, positive when charging.
inline double bank_power(const BankConfig& cfg, double u_cell, double i_cell) {
  return string_voltage(cfg, u_cell) * module_current(cfg, i_cell);
}

}  // namespace scsim
