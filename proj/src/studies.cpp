/*
 * Copyright (c) 2026 the scsim authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "scsim/studies.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "scsim/csv.hpp"

namespace scsim {

using nlohmann::json;

SweepSpec parse_sweep_spec(const json& j) {
  std::vector<std::string> issues;
  SweepSpec spec;
  if (!j.is_object()) throw ValidationError({"sweep: expected an object"});
  if (j.contains("schema") && j["schema"] != kSweepSchema)
    issues.push_back("sweep.schema: expected \"" + std::string(kSweepSchema) +
                     "\"");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.key() != "schema" && it.key() != "axes")
      issues.push_back("sweep: unknown key \"" + it.key() + "\"");
  if (!j.contains("axes") || !j["axes"].is_array() || j["axes"].empty()) {
    issues.push_back("sweep.axes: non-empty array required");
    throw ValidationError(std::move(issues));
  }
  for (std::size_t i = 0; i < j["axes"].size(); ++i) {
    const json& ja = j["axes"][i];
    const std::string path = "sweep.axes[" + std::to_string(i) + "]";
    SweepAxis axis;
    if (!ja.is_object() || !ja.contains("path") || !ja["path"].is_string()) {
      issues.push_back(path + ".path: required string is missing");
      continue;
    }
    axis.path = ja["path"].get<std::string>();
    for (auto it = ja.begin(); it != ja.end(); ++it)
      if (it.key() != "path" && it.key() != "values" && it.key() != "range")
        issues.push_back(path + ": unknown key \"" + it.key() + "\"");
    if (ja.contains("values") && ja["values"].is_array()) {
      for (const auto& v : ja["values"]) axis.values.push_back(v);
    } else if (ja.contains("range") && ja["range"].is_object()) {
      const json& r = ja["range"];
      if (!r.contains("from") || !r.contains("to") || !r.contains("step")) {
        issues.push_back(path + ".range: needs from/to/step");
        continue;
      }
      const double from = r["from"].get<double>();
      const double to = r["to"].get<double>();
      const double step = r["step"].get<double>();
      if (!(step > 0.0)) {
        issues.push_back(path + ".range.step: must be > 0");
        continue;
      }
      for (double v = from; v <= to + 0.5 * step; v += step)
        axis.values.push_back(std::min(v, to));
    } else {
      issues.push_back(path + ": needs a values array or a range");
      continue;
    }
    if (axis.values.empty())
      issues.push_back(path + ": empty value grid");
    spec.axes.push_back(std::move(axis));
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
  return spec;
}

namespace {

std::vector<std::vector<std::size_t>> grid_indices(const SweepSpec& spec) {
  std::size_t total = 1;
  for (const auto& a : spec.axes) total *= a.values.size();
  std::vector<std::vector<std::size_t>> out;
  out.reserve(total);
  std::vector<std::size_t> idx(spec.axes.size(), 0);
  for (std::size_t n = 0; n < total; ++n) {
    out.push_back(idx);
    for (std::size_t a = spec.axes.size(); a-- > 0;) {
      if (++idx[a] < spec.axes[a].values.size()) break;
      idx[a] = 0;
    }
  }
  return out;
}

json build_inaccurate_ranges(const SweepSpec& spec,
                             const std::vector<SweepRow>& rows,
                             const CellParams& cell, double f_nom) {
  std::ptrdiff_t variant_axis = -1;
  std::ptrdiff_t voltage_axis = -1;
  for (std::size_t a = 0; a < spec.axes.size(); ++a) {
    if (spec.axes[a].path == "/model/variant")
      variant_axis = static_cast<std::ptrdiff_t>(a);
    if (spec.axes[a].path == "/bank/initial_voltage")
      voltage_axis = static_cast<std::ptrdiff_t>(a);
  }
  if (variant_axis < 0 || voltage_axis < 0) return nullptr;

  const auto& variants = spec.axes[static_cast<std::size_t>(variant_axis)];
  const bool has_nonlinear =
      std::any_of(variants.values.begin(), variants.values.end(),
                  [](const json& v) { return v == "nonlinear"; });
  if (!has_nonlinear) return nullptr;

  // nadir lookup per (variant, voltage)
  auto nadir_of = [&](const std::string& variant, double u) -> double {
    for (const auto& row : rows) {
      const json& rv = row.coords[static_cast<std::size_t>(variant_axis)];
      const json& ru = row.coords[static_cast<std::size_t>(voltage_axis)];
      if (rv == variant && std::abs(ru.get<double>() - u) < 1e-12)
        return row.metrics.nadir_hz;
    }
    return std::nan("");
  };

  std::vector<double> voltages;
  for (const auto& v :
       spec.axes[static_cast<std::size_t>(voltage_axis)].values)
    voltages.push_back(v.get<double>());
  std::sort(voltages.begin(), voltages.end());

  json variants_out = json::object();
  for (const auto& vj : variants.values) {
    const std::string name = vj.get<std::string>();
    if (name == "nonlinear") continue;
    std::vector<bool> inaccurate(voltages.size(), false);
    for (std::size_t i = 0; i < voltages.size(); ++i) {
      const double dfmax_nl = f_nom - nadir_of("nonlinear", voltages[i]);
      const double dfmax = f_nom - nadir_of(name, voltages[i]);
      if (!(std::abs(dfmax_nl) > 1e-6)) continue;
      inaccurate[i] = std::abs(dfmax - dfmax_nl) / std::abs(dfmax_nl) > 0.05;
    }
    json intervals = json::array();
    double total_width = 0.0;
    std::size_t i = 0;
    while (i < voltages.size()) {
      if (!inaccurate[i]) {
        ++i;
        continue;
      }
      std::size_t jx = i;
      while (jx + 1 < voltages.size() && inaccurate[jx + 1]) ++jx;
      SocInterval iv;
      iv.u_lo = voltages[i];
      iv.u_hi = voltages[jx];
      iv.soc_lo = soc(cell, iv.u_lo).value;
      iv.soc_hi = soc(cell, iv.u_hi).value;
      total_width += iv.soc_hi - iv.soc_lo;
      intervals.push_back({{"u_lo", iv.u_lo},
                           {"u_hi", iv.u_hi},
                           {"soc_lo", iv.soc_lo},
                           {"soc_hi", iv.soc_hi}});
      i = jx + 1;
    }
    variants_out[name] = {{"intervals", intervals},
                          {"total_soc_width", total_width}};
  }
  return json{{"criterion", "nadir-deviation error > 5% vs nonlinear"},
              {"f_nom_hz", f_nom},
              {"variants", variants_out}};
}

}  // namespace

SweepResult run_sweep(const json& scenario_json, const SweepSpec& sweep,
                      int workers, double rocof_window_s) {
  const auto grid = grid_indices(sweep);

  // Validate every cell before running anything.
  std::vector<Scenario> scenarios;
  std::vector<std::vector<json>> coords;
  scenarios.reserve(grid.size());
  for (std::size_t n = 0; n < grid.size(); ++n) {
    json doc = scenario_json;
    std::vector<json> cell_coords;
    for (std::size_t a = 0; a < sweep.axes.size(); ++a) {
      const json& value = sweep.axes[a].values[grid[n][a]];
      doc[json::json_pointer(sweep.axes[a].path)] = value;
      cell_coords.push_back(value);
    }
    try {
      scenarios.push_back(parse_scenario(doc));
    } catch (const ValidationError& e) {
      std::vector<std::string> issues{"sweep cell " + std::to_string(n) +
                                      " is invalid:"};
      issues.insert(issues.end(), e.issues().begin(), e.issues().end());
      throw ValidationError(std::move(issues));
    }
    coords.push_back(std::move(cell_coords));
  }

  SweepResult result;
  for (const auto& a : sweep.axes) result.axis_paths.push_back(a.path);
  result.rows.resize(grid.size());

  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  auto work = [&] {
    for (;;) {
      const std::size_t n = next.fetch_add(1);
      if (n >= grid.size()) return;
      try {
        const Scenario& sc = scenarios[n];
        const SimResult sim = run_simulation(sc.spec, sc.sim);
        SweepRow row;
        row.index = n;
        row.coords = coords[n];
        row.metrics = compute_metrics(sim, rocof_window_s);
        row.u0 = sc.spec.u0;
        row.initial_soc = soc(sc.spec.bank.cell, sc.spec.u0).value;
        result.rows[n] = std::move(row);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
        next.store(grid.size());
        return;
      }
    }
  };

  const int n_workers = std::max(
      1, std::min<int>(workers, static_cast<int>(grid.size())));
  if (n_workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  const json ranges =
      build_inaccurate_ranges(sweep, result.rows, scenarios[0].spec.bank.cell,
                              scenarios[0].spec.sfr.f_nom);
  if (!ranges.is_null()) result.inaccurate_ranges = ranges;
  return result;
}

void write_sweep_csv(const std::filesystem::path& path, const SweepResult& r) {
  std::vector<std::string> header{"index"};
  for (const auto& p : r.axis_paths) header.push_back(p);
  for (const char* m :
       {"u0_v", "initial_soc", "nadir_hz", "time_of_nadir_s",
        "avg_rocof_hz_per_s", "time_to_discharge_s", "final_soc",
        "final_freq_hz"})
    header.push_back(m);

  CsvWriter csv(path, header);
  for (const auto& row : r.rows) {
    std::vector<std::string> cells{std::to_string(row.index)};
    for (const auto& c : row.coords)
      cells.push_back(c.is_string() ? c.get<std::string>()
                                    : format_double(c.get<double>()));
    cells.push_back(format_double(row.u0));
    cells.push_back(format_double(row.initial_soc));
    cells.push_back(format_double(row.metrics.nadir_hz));
    cells.push_back(format_double(row.metrics.time_of_nadir_s));
    cells.push_back(format_double(row.metrics.avg_rocof_hz_per_s));
    cells.push_back(row.metrics.time_to_discharge_s
                        ? format_double(*row.metrics.time_to_discharge_s)
                        : "");
    cells.push_back(format_double(row.metrics.final_soc));
    cells.push_back(format_double(row.metrics.final_freq_hz));
    csv.row(cells);
  }
}

std::vector<CurrentSegment> default_test_profile() {
  return {{10.0, 30.0}, {5.0, 0.0}, {10.0, -30.0}, {5.0, 0.0}};
}

ReduceStudyResult run_reduce_study(const ReduceStudyConfig& cfg) {
  {
    auto issues = validate(cfg.cell);
    if (!(cfg.dt > 0.0 && cfg.dt <= 0.01))
      issues.push_back("dt must be in (0, 0.01] s");
    if (!issues.empty()) throw ValidationError(std::move(issues));
  }
  const double u0 = cfg.u0 > 0.0 ? cfg.u0 : 0.5 * cfg.cell.u_rated;
  const std::vector<CurrentSegment> profile =
      cfg.profile.empty() ? default_test_profile() : cfg.profile;

  auto m1_only = [&](int n_groups) {
    CellParams p = cfg.cell;
    p.slow_branches.clear();
    p.leak_resistance.reset();
    p.n_groups = n_groups;
    return p;
  };

  ReduceStudyResult out;
  auto add = [&](const std::string& name, const CellModel& model) {
    out.series.push_back(
        {name, simulate_cell(model, u0, profile, cfg.dt, cfg.method)});
  };

  const int n_full = cfg.cell.n_groups;
  add("full", cfg.cell);
  add("m1-5g", m1_only(5));
  add("m1-1g", m1_only(1));
  add("m1-0g", m1_only(0));
  const std::string m1_full = "m1-" + std::to_string(n_full) + "g";
  if (n_full != 5 && n_full != 1 && n_full != 0)
    add(m1_full, m1_only(n_full));
  for (IdealVariant v : {IdealVariant::AtZeroVolts, IdealVariant::AtHalfRated,
                         IdealVariant::AtRated})
    add(std::string("ideal-") + to_string(v), ideal_from(cfg.cell, v));

  auto mape_row = [&](const std::string& test, const std::string& reference) {
    const auto& a = find_series(out, test).trace;
    const auto& b = find_series(out, reference).trace;
    out.table.push_back({test, reference,
                         mape_percent(a.u_terminal, b.u_terminal),
                         mape_percent(a.energy_j, b.energy_j)});
  };

  mape_row("full", m1_full);
  mape_row("m1-1g", "m1-5g");
  mape_row("m1-0g", "m1-5g");
  mape_row("m1-0g", "m1-1g");
  for (IdealVariant v : {IdealVariant::AtZeroVolts, IdealVariant::AtHalfRated,
                         IdealVariant::AtRated})
    mape_row(std::string("ideal-") + to_string(v), "m1-1g");
  return out;
}

void write_reduce_study(const std::filesystem::path& out_dir,
                        const ReduceStudyResult& r) {
  std::filesystem::create_directories(out_dir);
  {
    CsvWriter csv(out_dir / "reduce_mape.csv",
                  {"test", "reference", "voltage_mape_pct",
                   "energy_mape_pct"});
    for (const auto& row : r.table)
      csv.row({row.test, row.reference, format_double(row.voltage_mape_pct),
               format_double(row.energy_mape_pct)});
  }
  for (const auto& s : r.series) {
    CsvWriter csv(out_dir / ("ts_" + s.name + ".csv"),
                  {"time_s", "i_a", "u_terminal_v", "energy_j"});
    for (std::size_t i = 0; i < s.trace.time.size(); ++i)
      csv.row_numeric({s.trace.time[i], s.trace.i_a[i],
                       s.trace.u_terminal[i], s.trace.energy_j[i]});
  }
}

const VariantSeries& find_series(const ReduceStudyResult& r,
                                 const std::string& name) {
  for (const auto& s : r.series)
    if (s.name == name) return s;
  throw std::out_of_range("no series named " + name);
}

const MapeRow& find_row(const ReduceStudyResult& r, const std::string& test,
                        const std::string& reference) {
  for (const auto& row : r.table)
    if (row.test == test && row.reference == reference) return row;
  throw std::out_of_range("no MAPE row " + test + " vs " + reference);
}

}  // namespace scsim
