/*
 * Copyright (c) 2026 the scsim authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scsim/bank.hpp"
#include "scsim/cell.hpp"
#include "scsim/control.hpp"
#include "scsim/grid.hpp"
#include "scsim/integrator.hpp"

namespace scsim {

struct SimConfig {
  double dt = 1e-3;        // step [s], bounded to (0, 0.01]
  double t_end = 0.0;      // [s]
  Method method = Method::Rk4;
  int record_decimation = 1;
};

std::vector<std::string> validate(const SimConfig& c);

/// Which cell representation a run uses.
struct ModelVariant {
  enum class Kind { Nonlinear, Ideal } kind = Kind::Nonlinear;
  IdealVariant ideal = IdealVariant::AtHalfRated;
};

std::string to_string(const ModelVariant& v);
bool model_variant_from_string(const std::string& name, ModelVariant& out);

CellModel make_cell_model(const CellParams& cell, const ModelVariant& v);

/// Everything a single run needs, already validated.
struct SystemSpec {
  BankConfig bank;           // bank.cell holds the datasheet cell
  ModelVariant variant;
  GateParams gate;
  PQParams pq;
  LvrtParams lvrt;
  FreqCtrlParams freq;
  double p_ref_base = 0.0;   // steady active set-point [p.u. of bank rating]
  double q_ref_base = 0.0;   // reactive (or voltage) set-point [p.u.]
  SfrParams sfr;
  std::vector<Disturbance> disturbances;
  double u0 = 0.0;           // initial cell voltage [V]
};

std::vector<std::string> validate(const SystemSpec& s);

/// Uniformly sampled output channels; all vectors share the same length.
struct SimResult {
  std::vector<double> time;        // [s]
  std::vector<double> freq_hz;
  std::vector<double> delta_f_pu;
  std::vector<double> p_bank_mw;   // grid-side injection, discharge positive
  std::vector<double> p_bank_pu;   // same, p.u. of bank rating
  std::vector<double> i_cell_a;    // charging positive
  std::vector<double> u_cell_v;    // terminal (measurable) cell voltage
  std::vector<double> u_string_v;
  std::vector<double> soc;
  std::vector<uint8_t> charge_enabled;
  std::vector<uint8_t> discharge_enabled;
  std::vector<double> i_d_pu;
  std::vector<double> i_q_pu;
  std::vector<double> v_ac_pu;

  double onset_s = 0.0;  // first power-disturbance start, metrics reference
  double f_nom_hz = 0.0;
  std::size_t steps = 0;
  Method method = Method::Rk4;
  double dt_s = 0.0;

  std::size_t size() const { return time.size(); }
};

/// Raised when the state stops being finite.
struct SimulationAbort : std::runtime_error {
  explicit SimulationAbort(const std::string& what)
      : std::runtime_error(what) {}
};

/// Fixed-step integration of the coupled cell + control + grid system.
/// Discrete logic (gate, LVRT hysteresis, measured string voltage,
/// anti-windup freezes) is refreshed once per step on post-integration
/// values. Deterministic: identical inputs give bit-identical results.
SimResult run_simulation(const SystemSpec& spec, const SimConfig& cfg);

/// Trace of a cell driven by a piecewise-constant current profile
/// (no converter, no grid); used by the model-reduction studies.
struct CurrentSegment {
  double duration = 0.0;  // [s]
  double amps = 0.0;      // charging positive
};

struct CellTrace {
  std::vector<double> time;
  std::vector<double> u_terminal;  // [V]
  std::vector<double> i_a;
  std::vector<double> energy_j;    // model's stored-energy law at u_terminal
};

CellTrace simulate_cell(const CellModel& model, double u0,
                        std::span<const CurrentSegment> profile, double dt,
                        Method method = Method::Rk4);

}  // namespace scsim
