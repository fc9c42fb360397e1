/*
 * Copyright (c) 2026 the scsim authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scsim/simulation.hpp"

namespace scsim {

/// Carries every violated invariant; what() joins them.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

inline constexpr const char* kScenarioSchema = "scsim-scenario/1";

/// A validated scenario file: system + integration settings plus the
/// initial condition exactly as given.
struct Scenario {
  SystemSpec spec;
  SimConfig sim;
  std::optional<double> initial_voltage;  // [V]
  std::optional<double> initial_soc;      // fraction, mapped via the model
};

/// Strict parse: unknown keys are errors, every violated invariant is
/// reported. Throws ValidationError.
Scenario parse_scenario(const nlohmann::json& j);

/// Strict parse of a bare cell-parameter object (same schema as
/// bank.cell). Throws ValidationError.
CellParams parse_cell_json(const nlohmann::json& j,
                           const std::string& path = "cell");

Scenario load_scenario(const std::filesystem::path& path);

/// Serialization with all defaults materialized; parse(to_json(s)) is
/// identical to s.
nlohmann::json to_json(const Scenario& s);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path,
                     const nlohmann::json& j);

}  // namespace scsim
