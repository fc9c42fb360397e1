/*
 * Copyright (c) 2026 the scsim authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "scsim/bank.hpp"

namespace scsim {

std::vector<std::string> validate(const BankConfig& cfg) {
  std::vector<std::string> issues;
  if (cfg.n_s < 1) issues.push_back("n_s must be >= 1");
  if (cfg.n_p < 1) issues.push_back("n_p must be >= 1");
  if (!(cfg.p_rated > 0.0)) issues.push_back("p_rated must be > 0");
  for (auto& msg : validate(cfg.cell)) issues.push_back("cell: " + msg);
  return issues;
}

}  // namespace scsim
