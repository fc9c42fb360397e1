/*
 * Copyright (c) 2026 the scsim authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scsim/metrics.hpp"
#include "scsim/scenario.hpp"

namespace scsim {

// --- parameter sweep ---------------------------------------------------

inline constexpr const char* kSweepSchema = "scsim-sweep/1";

struct SweepAxis {
  std::string path;  // JSON pointer into the scenario document
  std::vector<nlohmann::json> values;
};

struct SweepSpec {
  std::vector<SweepAxis> axes;
};

/// Throws ValidationError (axes must be non-empty, grids non-empty;
/// ranges expand inclusively).
SweepSpec parse_sweep_spec(const nlohmann::json& j);

struct SweepRow {
  std::size_t index = 0;
  std::vector<nlohmann::json> coords;  // one value per axis
  Metrics metrics;
  double initial_soc = 0.0;  // nonlinear cell's SoC at the initial voltage
  double u0 = 0.0;
};

struct SocInterval {
  double u_lo = 0.0, u_hi = 0.0;
  double soc_lo = 0.0, soc_hi = 0.0;
};

struct SweepResult {
  std::vector<std::string> axis_paths;
  std::vector<SweepRow> rows;  // deterministic grid order
  /// Per ideal variant: initial-SoC intervals where the nadir deviation
  /// relative to the nonlinear run exceeds 5%. Present only when the
  /// sweep has a /model/variant axis including "nonlinear" and a
  /// /bank/initial_voltage axis.
  std::optional<nlohmann::json> inaccurate_ranges;
};

/// Runs the Cartesian product over `workers` threads (row order stays
/// the grid order). All grid cells are validated before anything runs.
SweepResult run_sweep(const nlohmann::json& scenario_json,
                      const SweepSpec& sweep, int workers = 1,
                      double rocof_window_s = 0.5);

void write_sweep_csv(const std::filesystem::path& path, const SweepResult& r);

// --- model-reduction study ----------------------------------------------

struct ReduceStudyConfig {
  CellParams cell;   // full datasheet set, slow branches included
  double u0 = 0.0;   // start voltage; default half rated when <= 0
  std::vector<CurrentSegment> profile;  // default +-30 A charge/discharge
  double dt = 1e-3;
  Method method = Method::Rk4;
};

std::vector<CurrentSegment> default_test_profile();

struct VariantSeries {
  std::string name;
  CellTrace trace;
};

struct MapeRow {
  std::string test;
  std::string reference;
  double voltage_mape_pct = 0.0;
  double energy_mape_pct = 0.0;
};

struct ReduceStudyResult {
  std::vector<VariantSeries> series;
  std::vector<MapeRow> table;
};

/// Simulates the same current test on the full model, the fast-branch
/// model with 5/1/0 RC groups and the three ideal reductions, and
/// tabulates voltage/energy MAPE between the canonical pairs.
ReduceStudyResult run_reduce_study(const ReduceStudyConfig& cfg);

void write_reduce_study(const std::filesystem::path& out_dir,
                        const ReduceStudyResult& r);

const VariantSeries& find_series(const ReduceStudyResult& r,
                                 const std::string& name);
const MapeRow& find_row(const ReduceStudyResult& r, const std::string& test,
                        const std::string& reference);

}  // namespace scsim
