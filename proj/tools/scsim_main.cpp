/*
 * Copyright (c) 2026 the scsim authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>

#include "scsim/csv.hpp"
#include "scsim/metrics.hpp"
#include "scsim/scenario.hpp"
#include "scsim/studies.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;

json finite_or_null(double v) {
  return std::isfinite(v) ? json(v) : json(nullptr);
}

json metrics_to_json(const scsim::Metrics& m) {
  json j{{"nadir_hz", finite_or_null(m.nadir_hz)},
         {"time_of_nadir_s", finite_or_null(m.time_of_nadir_s)},
         {"peak_hz", finite_or_null(m.peak_hz)},
         {"avg_rocof_hz_per_s", finite_or_null(m.avg_rocof_hz_per_s)},
         {"final_freq_hz", finite_or_null(m.final_freq_hz)},
         {"final_delta_f_pu", finite_or_null(m.final_delta_f_pu)},
         {"final_soc", finite_or_null(m.final_soc)},
         {"onset_s", finite_or_null(m.onset_s)},
         {"window_s", finite_or_null(m.window_s)}};
  j["time_to_discharge_s"] = m.time_to_discharge_s
                                 ? finite_or_null(*m.time_to_discharge_s)
                                 : json(nullptr);
  return j;
}

struct CommonOpts {
  std::string out_dir = ".";
  double window = 0.5;
  std::optional<long long> seed_echo;
};

int cmd_run(const std::string& scenario_path, const CommonOpts& opts) {
  const scsim::Scenario sc = scsim::load_scenario(scenario_path);
  const scsim::SimResult sim = scsim::run_simulation(sc.spec, sc.sim);
  const scsim::Metrics m = scsim::compute_metrics(sim, opts.window);

  fs::create_directories(opts.out_dir);
  scsim::write_timeseries_csv(fs::path(opts.out_dir) / "timeseries.csv", sim);

  json out{{"schema", "scsim-metrics/1"},
           {"metrics", metrics_to_json(m)},
           {"engine",
            {{"method", scsim::to_string(sim.method)},
             {"dt_s", sim.dt_s},
             {"steps", sim.steps},
             {"samples", sim.size()}}},
           {"scenario", scsim::to_json(sc)}};
  if (opts.seed_echo) out["seed_echo"] = *opts.seed_echo;
  scsim::write_json_file(fs::path(opts.out_dir) / "metrics.json", out);

  std::cout << "wrote " << (fs::path(opts.out_dir) / "timeseries.csv").string()
            << " and metrics.json (nadir "
            << scsim::format_double(m.nadir_hz) << " Hz)\n";
  return 0;
}

int cmd_sweep(const std::string& scenario_path, const std::string& spec_path,
              int workers, const CommonOpts& opts) {
  const json scenario_json = scsim::read_json_file(scenario_path);
  const scsim::SweepSpec spec =
      scsim::parse_sweep_spec(scsim::read_json_file(spec_path));
  const scsim::SweepResult r =
      scsim::run_sweep(scenario_json, spec, workers, opts.window);

  fs::create_directories(opts.out_dir);
  scsim::write_sweep_csv(fs::path(opts.out_dir) / "sweep.csv", r);

  json summary{{"schema", "scsim-sweep-summary/1"},
               {"rows", r.rows.size()},
               {"axes", r.axis_paths}};
  summary["inaccurate_soc_ranges"] =
      r.inaccurate_ranges ? *r.inaccurate_ranges : json(nullptr);
  if (opts.seed_echo) summary["seed_echo"] = *opts.seed_echo;
  scsim::write_json_file(fs::path(opts.out_dir) / "sweep_summary.json",
                         summary);

  std::cout << "wrote sweep.csv (" << r.rows.size()
            << " rows) and sweep_summary.json\n";
  return 0;
}

int cmd_reduce_study(const std::string& cell_path,
                     const std::string& profile_path, const CommonOpts& opts) {
  const json j = scsim::read_json_file(cell_path);
  if (!j.is_object() || !j.contains("cell"))
    throw scsim::ValidationError({"reduce-study input needs a cell section"});

  scsim::ReduceStudyConfig cfg;
  cfg.cell = scsim::parse_cell_json(j["cell"]);
  if (j.contains("u0")) cfg.u0 = j["u0"].get<double>();
  if (j.contains("dt")) cfg.dt = j["dt"].get<double>();
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.key() != "cell" && it.key() != "u0" && it.key() != "dt" &&
        it.key() != "profile")
      throw scsim::ValidationError(
          {"reduce-study input: unknown key \"" + it.key() + "\""});

  const json* profile = nullptr;
  json profile_doc;
  if (!profile_path.empty()) {
    profile_doc = scsim::read_json_file(profile_path);
    profile = &profile_doc;
  } else if (j.contains("profile")) {
    profile = &j["profile"];
  }
  if (profile) {
    if (!profile->is_array())
      throw scsim::ValidationError({"profile: expected an array"});
    for (const auto& seg : *profile)
      cfg.profile.push_back({seg.at("duration").get<double>(),
                             seg.at("amps").get<double>()});
  }

  const scsim::ReduceStudyResult r = scsim::run_reduce_study(cfg);
  scsim::write_reduce_study(opts.out_dir, r);

  std::cout << "wrote reduce_mape.csv and " << r.series.size()
            << " time-series files to " << opts.out_dir << "\n";
  for (const auto& row : r.table)
    std::cout << "  " << row.test << " vs " << row.reference << ": voltage "
              << scsim::format_double(row.voltage_mape_pct) << "%, energy "
              << scsim::format_double(row.energy_mape_pct) << "%\n";
  return 0;
}

int cmd_validate(const std::string& scenario_path) {
  scsim::load_scenario(scenario_path);
  std::cout << scenario_path << ": OK\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"supercapacitor bank dynamics toolkit"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string scenario_path, spec_path, cell_path, profile_path;
  int workers = 1;

  auto* run = app.add_subcommand("run", "run one scenario");
  run->add_option("scenario", scenario_path, "scenario file")->required();
  run->add_option("--out", opts.out_dir, "output directory");
  run->add_option("--window", opts.window, "average-RoCoF window [s]");
  run->add_option("--seed-echo", opts.seed_echo,
                  "metadata echoed into outputs; the engine is deterministic");

  auto* sweep = app.add_subcommand("sweep", "run a parameter sweep");
  sweep->add_option("scenario", scenario_path, "base scenario file")
      ->required();
  sweep->add_option("--spec", spec_path, "sweep axes file")->required();
  sweep->add_option("--out", opts.out_dir, "output directory");
  sweep->add_option("--workers", workers, "parallel runs");
  sweep->add_option("--window", opts.window, "average-RoCoF window [s]");
  sweep->add_option("--seed-echo", opts.seed_echo, "metadata echo");

  auto* reduce = app.add_subcommand(
      "reduce-study", "compare model reductions on a current test");
  reduce->add_option("cell", cell_path, "cell parameter file")->required();
  reduce->add_option("--profile", profile_path,
                     "piecewise-constant current profile file");
  reduce->add_option("--out", opts.out_dir, "output directory");

  auto* validate = app.add_subcommand("validate", "validate a scenario file");
  validate->add_option("scenario", scenario_path, "scenario file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(scenario_path, opts);
    if (sweep->parsed())
      return cmd_sweep(scenario_path, spec_path, workers, opts);
    if (reduce->parsed())
      return cmd_reduce_study(cell_path, profile_path, opts);
    if (validate->parsed()) return cmd_validate(scenario_path);
  } catch (const scsim::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitValidation;
  } catch (const scsim::SimulationAbort& e) {
    std::cerr << "simulation aborted: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
