/*
 * Copyright (c) 2026 the scsim authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <optional>
#include <span>

#include "scsim/simulation.hpp"

namespace scsim {

/// Figures of merit derived from a recorded run.
struct Metrics {
  double nadir_hz = 0.0;
  double time_of_nadir_s = 0.0;
  double peak_hz = 0.0;
  double avg_rocof_hz_per_s = 0.0;  // finite-difference slope over the window
  std::optional<double> time_to_discharge_s;  // onset to first gate-disable
  double final_freq_hz = 0.0;
  double final_delta_f_pu = 0.0;
  double final_soc = 0.0;
  double onset_s = 0.0;
  double window_s = 0.0;
};

/// Throws std::invalid_argument on an empty series. The RoCoF window is
/// measured from the disturbance onset recorded in the series.
Metrics compute_metrics(const SimResult& r, double rocof_window_s = 0.5);

/// Mean absolute percentage error between two equally sampled series.
/// Points where |reference| < guard * max|reference| are excluded.
double mape_percent(std::span<const double> test,
                    std::span<const double> reference, double guard = 1e-3);

}  // namespace scsim
