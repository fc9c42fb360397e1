/*
 * Copyright (c) 2026 the scsim authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "scsim/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace scsim {

std::vector<std::string> validate(const SimConfig& c) {
  std::vector<std::string> issues;
  if (!(c.dt > 0.0 && c.dt <= 0.01))
    issues.push_back("dt must be in (0, 0.01] s");
  if (!(c.t_end > 0.0)) issues.push_back("t_end must be > 0");
  if (c.record_decimation < 1)
    issues.push_back("record_decimation must be >= 1");
  return issues;
}

std::string to_string(const ModelVariant& v) {
  if (v.kind == ModelVariant::Kind::Nonlinear) return "nonlinear";
  return std::string("ideal:") + to_string(v.ideal);
}

bool model_variant_from_string(const std::string& name, ModelVariant& out) {
  if (name == "nonlinear") {
    out = {ModelVariant::Kind::Nonlinear, IdealVariant::AtHalfRated};
    return true;
  }
  const std::string prefix = "ideal:";
  if (name.rfind(prefix, 0) != 0) return false;
  const std::string tail = name.substr(prefix.size());
  ModelVariant v;
  v.kind = ModelVariant::Kind::Ideal;
  if (tail == "at-zero-volts") v.ideal = IdealVariant::AtZeroVolts;
  else if (tail == "at-half-rated") v.ideal = IdealVariant::AtHalfRated;
  else if (tail == "at-rated") v.ideal = IdealVariant::AtRated;
  else return false;
  out = v;
  return true;
}

CellModel make_cell_model(const CellParams& cell, const ModelVariant& v) {
  if (v.kind == ModelVariant::Kind::Nonlinear) return cell;
  return ideal_from(cell, v.ideal);
}

std::vector<std::string> validate(const SystemSpec& s) {
  std::vector<std::string> issues;
  auto add = [&issues](const std::string& prefix,
                       const std::vector<std::string>& sub) {
    for (auto& m : sub) issues.push_back(prefix + m);
  };
  add("bank: ", validate(s.bank));
  add("gate: ", validate(s.gate));
  add("pq: ", validate(s.pq));
  add("lvrt: ", validate(s.lvrt));
  add("freq: ", validate(s.freq));
  add("sfr: ", validate(s.sfr));
  for (std::size_t i = 0; i < s.disturbances.size(); ++i)
    add("disturbances[" + std::to_string(i) + "]: ",
        validate(s.disturbances[i]));
  if (s.u0 < 0.0 || s.u0 > s.gate.u_ch_max)
    issues.push_back("initial voltage must be in [0, u_ch_max]");
  if (s.pq.q_mode == QMode::TerminalVoltage && !(s.q_ref_base > 0.0))
    issues.push_back(
        "terminal-voltage mode needs q_ref_base > 0 (the AC voltage "
        "set-point)");
  return issues;
}

namespace {

/// State layout and per-step frozen quantities of the coupled system.
class CoupledSystem {
 public:
  explicit CoupledSystem(const SystemSpec& spec)
      : spec_(spec), model_(make_cell_model(spec.bank.cell, spec.variant)) {
    n_cell_ = cell_state_size(model_);
    i_pmeas_ = n_cell_;
    i_qmeas_ = n_cell_ + 1;
    i_intd_ = n_cell_ + 2;
    i_intq_ = n_cell_ + 3;
    i_fmeas_ = n_cell_ + 4;
    i_wvir_ = n_cell_ + 5;
    i_wqd_ = n_cell_ + 6;
    i_df_ = n_cell_ + 7;
    i_gov_ = n_cell_ + 8;
    i_reh_ = n_cell_ + 9;
    n_ = n_cell_ + 10;

    u_string_meas_ = string_voltage(spec_.bank, spec_.u0);
    gate_ = gate_step(spec_.gate, GateState{}, spec_.u0);
    v_ac_ = bus_voltage(spec_.disturbances, 0.0);
    p_dist_ = power_disturbance(spec_.disturbances, 0.0);
  }

  int size() const { return n_; }
  const CellModel& model() const { return model_; }

  Eigen::VectorXd initial_state() const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n_);
    x.head(n_cell_) = to_vector(initial_cell_state(model_, spec_.u0));
    x[i_pmeas_] = 0.0;
    x[i_qmeas_] = initial_q_meas();
    x[i_fmeas_] = 1.0;
    return x;
  }

  struct Outputs {
    double delta_p_ref = 0.0;
    double i_d0 = 0.0, i_q0 = 0.0;  // raw PI outputs
    double i_d = 0.0, i_q = 0.0;    // applied converter currents
    double p_act = 0.0, q_act = 0.0;
    double i_cell = 0.0;
    double u_term = 0.0;
    double v_ac = 1.0;
    bool dc_saturated = false;
  };

  /// Algebraic chain from a state, with the frozen discrete quantities.
  /// Exogenous inputs (bus voltage, disturbance power) are zero-order
  /// held over each step so events land exactly on step boundaries.
  Outputs outputs(const Eigen::VectorXd& x) const {
    Outputs o;
    o.v_ac = v_ac_;

    FreqCtrlState fs{x[i_wvir_], x[i_wqd_], x[i_fmeas_]};
    o.delta_p_ref = freq_ctrl_output(spec_.freq, fs);

    const double p_ref = spec_.p_ref_base + o.delta_p_ref;
    const double q_ref = spec_.q_ref_base;
    PQState ps{x[i_intd_], x[i_intq_], x[i_pmeas_], x[i_qmeas_]};
    const PQOutput raw = pq_output(spec_.pq, ps, p_ref, q_ref);
    o.i_d0 = raw.i_d0;
    o.i_q0 = raw.i_q0;

    const LvrtResult lim =
        lvrt_limit(spec_.lvrt, spec_.pq.i_max, raw.i_d0, raw.i_q0, o.v_ac,
                   in_lvrt_);
    o.i_d = lim.i_d;
    o.i_q = lim.i_q;

    // The charge-control block also gates the active converter current:
    // no grid power may flow in a disabled direction (injection
    // discharges the bank, absorption charges it).
    if (o.i_d > 0.0 && !gate_.discharge_enabled) o.i_d = 0.0;
    if (o.i_d < 0.0 && !gate_.charge_enabled) o.i_d = 0.0;

    o.p_act = o.v_ac * o.i_d;
    o.q_act = o.v_ac * o.i_q;

    // DC side works in SI units; positive DC power = charging.
    const double p_dc = -o.p_act * spec_.bank.p_rated;
    const DcCurrent dc =
        dc_current(spec_.bank, p_dc, u_string_meas_, spec_.gate, gate_);
    o.i_cell = dc.i_cell;
    o.dc_saturated = dc.saturated;

    o.u_term = terminal_voltage(model_, cell_state(x), o.i_cell);
    return o;
  }

  Eigen::VectorXd derivatives(const Eigen::VectorXd& x) const {
    const Outputs o = outputs(x);
    Eigen::VectorXd dx(n_);

    const CellState ds = cell_derivatives(model_, cell_state(x), o.i_cell);
    dx.head(n_cell_) = to_vector(ds);

    const double p_ref = spec_.p_ref_base + o.delta_p_ref;
    const double q_act_meas =
        spec_.pq.q_mode == QMode::TerminalVoltage ? o.v_ac : o.q_act;
    dx[i_pmeas_] = (o.p_act - x[i_pmeas_]) / spec_.pq.tau_c;
    dx[i_qmeas_] = (q_act_meas - x[i_qmeas_]) / spec_.pq.tau_c;
    dx[i_intd_] = pi_integrator_rate(x[i_intd_], p_ref - x[i_pmeas_],
                                     spec_.pq.ki_d, spec_.pq.i_max, freeze_d_);
    dx[i_intq_] =
        pi_integrator_rate(x[i_intq_], spec_.q_ref_base - x[i_qmeas_],
                           spec_.pq.ki_q, spec_.pq.i_max, freeze_q_);

    const double f_grid = 1.0 + x[i_df_];
    dx[i_fmeas_] = (f_grid - x[i_fmeas_]) / spec_.freq.tau_pll;
    const double df_db =
        apply_deadband(x[i_fmeas_] - 1.0, spec_.freq.deadband);
    dx[i_wvir_] = (df_db - x[i_wvir_]) / spec_.freq.tau_w_i;
    dx[i_wqd_] = (df_db - x[i_wqd_]) / spec_.freq.tau_w_d;

    const double p_sc_sys = o.p_act * spec_.bank.p_rated / spec_.sfr.s_base;
    GridState gs{x[i_df_], x[i_gov_], x[i_reh_]};
    const GridState dg = sfr_derivatives(spec_.sfr, gs, p_sc_sys, p_dist_);
    dx[i_df_] = dg.delta_f;
    dx[i_gov_] = dg.x_gov;
    dx[i_reh_] = dg.x_reheat;
    return dx;
  }

  /// Refresh gate, LVRT flag, measured string voltage and anti-windup
  /// freezes from the post-integration state; re-clamp the PI
  /// integrators (rate gating can overshoot within one step).
  void update_discrete(double t, Eigen::VectorXd& x) {
    x[i_intd_] = std::clamp(x[i_intd_], -spec_.pq.i_max, spec_.pq.i_max);
    x[i_intq_] = std::clamp(x[i_intq_], -spec_.pq.i_max, spec_.pq.i_max);
    v_ac_ = bus_voltage(spec_.disturbances, t);
    p_dist_ = power_disturbance(spec_.disturbances, t);
    const Outputs o = outputs(x);
    u_string_meas_ = string_voltage(spec_.bank, o.u_term);
    gate_ = gate_step(spec_.gate, gate_, o.u_term);
    in_lvrt_ = lvrt_limit(spec_.lvrt, spec_.pq.i_max, o.i_d0, o.i_q0, o.v_ac,
                          in_lvrt_)
                   .in_lvrt;
    freeze_d_ = std::abs(o.i_d - o.i_d0) > 1e-12 || o.dc_saturated;
    freeze_q_ = std::abs(o.i_q - o.i_q0) > 1e-12;
  }

  CellState cell_state(const Eigen::VectorXd& x) const {
    return cell_state_from_vector(model_, x.head(n_cell_));
  }

  double delta_f(const Eigen::VectorXd& x) const { return x[i_df_]; }

  const GateState& gate() const { return gate_; }

 private:
  double initial_q_meas() const {
    return spec_.pq.q_mode == QMode::TerminalVoltage ? 1.0 : 0.0;
  }

  SystemSpec spec_;
  CellModel model_;
  int n_cell_ = 0, n_ = 0;
  int i_pmeas_ = 0, i_qmeas_ = 0, i_intd_ = 0, i_intq_ = 0;
  int i_fmeas_ = 0, i_wvir_ = 0, i_wqd_ = 0;
  int i_df_ = 0, i_gov_ = 0, i_reh_ = 0;

  // frozen per step
  GateState gate_;
  bool in_lvrt_ = false;
  double u_string_meas_ = 0.0;
  double v_ac_ = 1.0;
  double p_dist_ = 0.0;
  bool freeze_d_ = false;
  bool freeze_q_ = false;
};

double first_power_onset(std::span<const Disturbance> ds) {
  double onset = 0.0;
  bool found = false;
  for (const auto& d : ds) {
    if (d.kind == DisturbanceKind::VoltageDip && d.accel_pu == 0.0) continue;
    if (!found || d.t_start < onset) {
      onset = d.t_start;
      found = true;
    }
  }
  return found ? onset : 0.0;
}

}  // namespace

SimResult run_simulation(const SystemSpec& spec, const SimConfig& cfg) {
  {
    auto issues = validate(spec);
    auto sim_issues = validate(cfg);
    issues.insert(issues.end(), sim_issues.begin(), sim_issues.end());
    if (!issues.empty()) {
      std::string msg = "invalid system spec:";
      for (auto& m : issues) msg += "\n  - " + m;
      throw std::invalid_argument(msg);
    }
  }

  CoupledSystem sys(spec);
  Eigen::VectorXd x = sys.initial_state();
  const auto n_steps = static_cast<std::size_t>(
      std::ceil(cfg.t_end / cfg.dt - 1e-9));

  SimResult r;
  r.onset_s = first_power_onset(spec.disturbances);
  r.f_nom_hz = spec.sfr.f_nom;
  r.steps = n_steps;
  r.method = cfg.method;
  r.dt_s = cfg.dt;

  const auto reserve = n_steps / cfg.record_decimation + 2;
  for (auto* ch : {&r.time, &r.freq_hz, &r.delta_f_pu, &r.p_bank_mw,
                   &r.p_bank_pu, &r.i_cell_a, &r.u_cell_v, &r.u_string_v,
                   &r.soc, &r.i_d_pu, &r.i_q_pu, &r.v_ac_pu})
    ch->reserve(reserve);

  const DerivFn f = [&sys](double, const Eigen::VectorXd& v) {
    return sys.derivatives(v);
  };

  auto record = [&](double t, const Eigen::VectorXd& state) {
    const auto o = sys.outputs(state);
    const CellState cs = sys.cell_state(state);
    r.time.push_back(t);
    r.delta_f_pu.push_back(sys.delta_f(state));
    r.freq_hz.push_back(spec.sfr.f_nom * (1.0 + sys.delta_f(state)));
    r.p_bank_pu.push_back(o.p_act);
    r.p_bank_mw.push_back(o.p_act * spec.bank.p_rated / 1e6);
    r.i_cell_a.push_back(o.i_cell);
    r.u_cell_v.push_back(o.u_term);
    r.u_string_v.push_back(string_voltage(spec.bank, o.u_term));
    r.soc.push_back(soc(sys.model(), std::max(0.0, cs.u_c)).value);
    r.charge_enabled.push_back(sys.gate().charge_enabled ? 1 : 0);
    r.discharge_enabled.push_back(sys.gate().discharge_enabled ? 1 : 0);
    r.i_d_pu.push_back(o.i_d);
    r.i_q_pu.push_back(o.i_q);
    r.v_ac_pu.push_back(o.v_ac);
  };

  record(0.0, x);
  for (std::size_t k = 1; k <= n_steps; ++k) {
    const double t_prev = static_cast<double>(k - 1) * cfg.dt;
    const double t = static_cast<double>(k) * cfg.dt;
    x = integrate_step(cfg.method, f, t_prev, x, cfg.dt);
    if (!x.allFinite())
      throw SimulationAbort("state no longer finite at t = " +
                            std::to_string(t) + " s");
    sys.update_discrete(t, x);
    if (k % static_cast<std::size_t>(cfg.record_decimation) == 0 ||
        k == n_steps)
      record(t, x);
  }
  return r;
}

CellTrace simulate_cell(const CellModel& model, double u0,
                        std::span<const CurrentSegment> profile, double dt,
                        Method method) {
  CellTrace tr;
  Eigen::VectorXd x = to_vector(initial_cell_state(model, u0));

  double t = 0.0;
  auto record = [&](double i_now) {
    const CellState s = cell_state_from_vector(model, x);
    const double u_term = terminal_voltage(model, s, i_now);
    tr.time.push_back(t);
    tr.u_terminal.push_back(u_term);
    tr.i_a.push_back(i_now);
    tr.energy_j.push_back(stored_energy(model, std::max(0.0, u_term)));
  };

  record(profile.empty() ? 0.0 : profile[0].amps);
  for (const auto& seg : profile) {
    const auto n_steps =
        static_cast<std::size_t>(std::ceil(seg.duration / dt - 1e-9));
    const DerivFn f = [&](double, const Eigen::VectorXd& v) {
      return to_vector(
          cell_derivatives(model, cell_state_from_vector(model, v), seg.amps));
    };
    for (std::size_t k = 0; k < n_steps; ++k) {
      x = integrate_step(method, f, t, x, dt);
      t += dt;
      if (!x.allFinite())
        throw SimulationAbort("cell state no longer finite at t = " +
                              std::to_string(t) + " s");
      record(seg.amps);
    }
  }
  return tr;
}

}  // namespace scsim
