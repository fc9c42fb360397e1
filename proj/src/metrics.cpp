/*
 * Copyright (c) 2026 the scsim authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "scsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace scsim {

namespace {

// Linear interpolation on the (strictly increasing) time grid.
double interpolate(const std::vector<double>& t, const std::vector<double>& y,
                   double at) {
  if (at <= t.front()) return y.front();
  if (at >= t.back()) return y.back();
  const auto it = std::upper_bound(t.begin(), t.end(), at);
  const auto i = static_cast<std::size_t>(it - t.begin());
  const double w = (at - t[i - 1]) / (t[i] - t[i - 1]);
  return y[i - 1] + w * (y[i] - y[i - 1]);
}

}  // namespace

Metrics compute_metrics(const SimResult& r, double rocof_window_s) {
  if (r.size() == 0)
    throw std::invalid_argument("compute_metrics: empty series");

  Metrics m;
  m.onset_s = r.onset_s;
  m.window_s = rocof_window_s;

  const auto nadir_it = std::min_element(r.freq_hz.begin(), r.freq_hz.end());
  m.nadir_hz = *nadir_it;
  m.time_of_nadir_s =
      r.time[static_cast<std::size_t>(nadir_it - r.freq_hz.begin())];
  m.peak_hz = *std::max_element(r.freq_hz.begin(), r.freq_hz.end());

  const double t0 = std::clamp(r.onset_s, r.time.front(), r.time.back());
  const double t1 = std::min(t0 + rocof_window_s, r.time.back());
  m.avg_rocof_hz_per_s =
      t1 > t0 ? (interpolate(r.time, r.freq_hz, t1) -
                 interpolate(r.time, r.freq_hz, t0)) /
                    (t1 - t0)
              : 0.0;

  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r.time[i] >= r.onset_s && r.discharge_enabled[i] == 0) {
      m.time_to_discharge_s = r.time[i] - r.onset_s;
      break;
    }
  }

  m.final_freq_hz = r.freq_hz.back();
  m.final_delta_f_pu = r.delta_f_pu.back();
  m.final_soc = r.soc.back();
  return m;
}

double mape_percent(std::span<const double> test,
                    std::span<const double> reference, double guard) {
  if (test.size() != reference.size() || reference.empty())
    throw std::invalid_argument("mape_percent: size mismatch or empty");
  double peak = 0.0;
  for (double v : reference) peak = std::max(peak, std::abs(v));
  const double cutoff = guard * peak;
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    if (std::abs(reference[i]) < cutoff) continue;
    sum += std::abs(test[i] - reference[i]) / std::abs(reference[i]);
    ++n;
  }
  return n == 0 ? 0.0 : 100.0 * sum / static_cast<double>(n);
}

}  // namespace scsim
