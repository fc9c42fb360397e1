/*
 * Copyright (c) 2026 the scsim authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "scsim/scenario.hpp"

#include <algorithm>
#include <fstream>

namespace scsim {

using nlohmann::json;

namespace {

std::string join_issues(const std::vector<std::string>& issues) {
  std::string msg = "scenario validation failed:";
  for (const auto& m : issues) msg += "\n  - " + m;
  return msg;
}

/// Strict object reader: tracks the key set, records issues with paths.
class Reader {
 public:
  Reader(const json& obj, std::string path, std::vector<std::string>& issues)
      : obj_(obj), path_(std::move(path)), issues_(issues) {
    if (!obj_.is_object()) {
      issues_.push_back(path_ + ": expected an object");
      ok_ = false;
    }
  }

  bool ok() const { return ok_; }
  bool has(const char* key) const { return ok_ && obj_.contains(key); }

  double num(const char* key, std::optional<double> def = std::nullopt) {
    seen_.push_back(key);
    if (!has(key)) {
      if (def) return *def;
      issues_.push_back(path_ + "." + key + ": required number is missing");
      return 0.0;
    }
    if (!obj_[key].is_number()) {
      issues_.push_back(path_ + "." + key + ": expected a number");
      return def.value_or(0.0);
    }
    return obj_[key].get<double>();
  }

  int integer(const char* key, std::optional<int> def = std::nullopt) {
    seen_.push_back(key);
    if (!has(key)) {
      if (def) return *def;
      issues_.push_back(path_ + "." + key + ": required integer is missing");
      return 0;
    }
    if (!obj_[key].is_number_integer()) {
      issues_.push_back(path_ + "." + key + ": expected an integer");
      return def.value_or(0);
    }
    return obj_[key].get<int>();
  }

  std::string str(const char* key,
                  std::optional<std::string> def = std::nullopt) {
    seen_.push_back(key);
    if (!has(key)) {
      if (def) return *def;
      issues_.push_back(path_ + "." + key + ": required string is missing");
      return {};
    }
    if (!obj_[key].is_string()) {
      issues_.push_back(path_ + "." + key + ": expected a string");
      return def.value_or(std::string{});
    }
    return obj_[key].get<std::string>();
  }

  std::optional<double> opt_num(const char* key) {
    seen_.push_back(key);
    if (!has(key)) return std::nullopt;
    if (!obj_[key].is_number()) {
      issues_.push_back(path_ + "." + key + ": expected a number");
      return std::nullopt;
    }
    return obj_[key].get<double>();
  }

  const json* object(const char* key) {
    seen_.push_back(key);
    if (!has(key)) return nullptr;
    if (!obj_[key].is_object()) {
      issues_.push_back(path_ + "." + key + ": expected an object");
      return nullptr;
    }
    return &obj_[key];
  }

  const json* array(const char* key) {
    seen_.push_back(key);
    if (!has(key)) return nullptr;
    if (!obj_[key].is_array()) {
      issues_.push_back(path_ + "." + key + ": expected an array");
      return nullptr;
    }
    return &obj_[key];
  }

  /// Every key must have been consumed by one of the accessors.
  void finish() {
    if (!ok_) return;
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (std::find(seen_.begin(), seen_.end(), it.key()) == seen_.end())
        issues_.push_back(path_ + ": unknown key \"" + it.key() + "\"");
    }
  }

  const std::string& path() const { return path_; }
  std::vector<std::string>& issues() { return issues_; }

 private:
  const json& obj_;
  std::string path_;
  std::vector<std::string>& issues_;
  std::vector<std::string> seen_;
  bool ok_ = true;
};

CellParams parse_cell(const json& j, const std::string& path,
                      std::vector<std::string>& issues) {
  Reader r(j, path, issues);
  CellParams c;
  c.c0 = r.num("c0");
  c.kv = r.num("kv", 0.0);
  c.rs = r.num("rs");
  c.rdc = r.num("rdc");
  c.n_groups = r.integer("n_groups", 1);
  c.u_rated = r.num("u_rated");
  if (const json* arr = r.array("slow_branches")) {
    for (std::size_t i = 0; i < arr->size(); ++i) {
      Reader rb((*arr)[i], path + ".slow_branches[" + std::to_string(i) + "]",
                issues);
      SlowBranch b;
      b.r = rb.num("r");
      b.c = rb.num("c");
      rb.finish();
      c.slow_branches.push_back(b);
    }
  }
  c.leak_resistance = r.opt_num("leak_resistance");
  if (const json* t = r.object("tau_law")) {
    Reader rt(*t, path + ".tau_law", issues);
    LinearTau law;
    law.tau0 = rt.num("tau0");
    law.k_tau = rt.num("k_tau", 0.0);
    rt.finish();
    c.tau_law = law;
  }
  r.finish();
  return c;
}

GateParams parse_gate(const json* j, const std::string& path,
                      std::vector<std::string>& issues) {
  GateParams g{2.71, 2.4, 1.1, 1.4, 615.0, 615.0};
  if (!j) return g;
  Reader r(*j, path, issues);
  g.u_ch_max = r.num("u_ch_max", g.u_ch_max);
  g.u_ch_start = r.num("u_ch_start", g.u_ch_start);
  g.u_dch_min = r.num("u_dch_min", g.u_dch_min);
  g.u_dch_start = r.num("u_dch_start", g.u_dch_start);
  g.i_ch_max = r.num("i_ch_max", g.i_ch_max);
  g.i_dch_max = r.num("i_dch_max", g.i_dch_max);
  r.finish();
  return g;
}

PQParams parse_pq(const json* j, const std::string& path,
                  std::vector<std::string>& issues) {
  PQParams p;
  p.ki_d = p.ki_q = 100.0;
  if (!j) return p;
  Reader r(*j, path, issues);
  p.kp_d = r.num("kp_d", p.kp_d);
  p.ki_d = r.num("ki_d", p.ki_d);
  p.kp_q = r.num("kp_q", p.kp_q);
  p.ki_q = r.num("ki_q", p.ki_q);
  p.tau_c = r.num("tau_c", p.tau_c);
  p.i_max = r.num("i_max", p.i_max);
  const std::string mode = r.str("q_mode", "reactive-power");
  if (mode == "reactive-power") p.q_mode = QMode::ReactivePower;
  else if (mode == "terminal-voltage") p.q_mode = QMode::TerminalVoltage;
  else issues.push_back(path + ".q_mode: unknown mode \"" + mode + "\"");
  r.finish();
  return p;
}

LvrtParams parse_lvrt(const json* j, const std::string& path,
                      std::vector<std::string>& issues) {
  LvrtParams p;
  if (!j) return p;
  Reader r(*j, path, issues);
  p.v_enter = r.num("v_enter", p.v_enter);
  p.v_exit = r.num("v_exit", p.v_exit);
  p.k_q = r.num("k_q", p.k_q);
  p.v_ref = r.num("v_ref", p.v_ref);
  r.finish();
  return p;
}

FreqCtrlParams parse_freq(const json* j, const std::string& path,
                          std::vector<std::string>& issues) {
  FreqCtrlParams p;
  if (!j) return p;
  Reader r(*j, path, issues);
  p.k_vir = r.num("k_vir", p.k_vir);
  p.tau_w_i = r.num("tau_w_inertial", p.tau_w_i);
  p.k_qd = r.num("k_quasi_droop", p.k_qd);
  p.tau_w_d = r.num("tau_w_droop", p.tau_w_d);
  p.tau_pll = r.num("tau_pll", p.tau_pll);
  p.deadband = r.num("deadband", p.deadband);
  r.finish();
  return p;
}

SfrParams parse_sfr(const json* j, const std::string& path,
                    std::vector<std::string>& issues) {
  SfrParams p;
  p.s_base = 400e6;
  if (!j) return p;
  Reader r(*j, path, issues);
  p.f_nom = r.num("f_nom", p.f_nom);
  p.h = r.num("h", p.h);
  p.d = r.num("d", p.d);
  p.r = r.num("r", p.r);
  p.tau_g = r.num("tau_g", p.tau_g);
  p.tau_r = r.num("tau_r", p.tau_r);
  p.k_r = r.num("k_r", p.k_r);
  p.s_base = r.num("s_base_mva", p.s_base / 1e6) * 1e6;
  r.finish();
  return p;
}

std::vector<Disturbance> parse_disturbances(const json* arr,
                                            const std::string& path,
                                            std::vector<std::string>& issues) {
  std::vector<Disturbance> out;
  if (!arr) return out;
  for (std::size_t i = 0; i < arr->size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    Reader r((*arr)[i], p, issues);
    Disturbance d;
    const std::string kind = r.str("kind");
    if (!kind.empty() && !disturbance_kind_from_string(kind, d.kind))
      issues.push_back(p + ".kind: unknown kind \"" + kind + "\"");
    d.t_start = r.num("t_start", 0.0);
    d.magnitude = r.num("magnitude");
    if (d.kind == DisturbanceKind::VoltageDip) {
      d.duration = r.num("duration");
      d.accel_pu = r.num("accel", 0.0);
    }
    r.finish();
    out.push_back(d);
  }
  return out;
}

SimConfig parse_sim(const json* j, const std::string& path,
                    std::vector<std::string>& issues) {
  SimConfig c;
  if (!j) {
    issues.push_back(path + ": required section is missing");
    return c;
  }
  Reader r(*j, path, issues);
  c.dt = r.num("dt", c.dt);
  c.t_end = r.num("t_end");
  const std::string method = r.str("method", "rk4");
  if (!method_from_string(method, c.method))
    issues.push_back(path + ".method: unknown method \"" + method + "\"");
  c.record_decimation = r.integer("record_decimation", 1);
  r.finish();
  return c;
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

CellParams parse_cell_json(const json& j, const std::string& path) {
  std::vector<std::string> issues;
  CellParams cell = parse_cell(j, path, issues);
  if (issues.empty())
    for (auto& m : validate(cell)) issues.push_back(path + ": " + m);
  if (!issues.empty()) throw ValidationError(std::move(issues));
  return cell;
}

Scenario parse_scenario(const json& j) {
  std::vector<std::string> issues;
  Scenario s;

  Reader root(j, "scenario", issues);
  const std::string schema = root.str("schema");
  if (!schema.empty() && schema != kScenarioSchema)
    issues.push_back("scenario.schema: expected \"" +
                     std::string(kScenarioSchema) + "\", got \"" + schema +
                     "\"");

  if (const json* model = root.object("model")) {
    Reader rm(*model, "model", issues);
    const std::string variant = rm.str("variant", "nonlinear");
    if (!model_variant_from_string(variant, s.spec.variant))
      issues.push_back("model.variant: unknown variant \"" + variant + "\"");
    rm.finish();
  }

  if (const json* bank = root.object("bank")) {
    Reader rb(*bank, "bank", issues);
    if (const json* cell = rb.object("cell"))
      s.spec.bank.cell = parse_cell(*cell, "bank.cell", issues);
    else
      issues.push_back("bank.cell: required section is missing");
    s.spec.bank.n_s = rb.integer("n_series");
    s.spec.bank.n_p = rb.integer("n_parallel");
    s.spec.bank.p_rated = rb.num("p_rated_mw") * 1e6;
    s.initial_voltage = rb.opt_num("initial_voltage");
    s.initial_soc = rb.opt_num("initial_soc");
    rb.finish();
  } else {
    issues.push_back("bank: required section is missing");
  }

  if (const json* control = root.object("control")) {
    Reader rc(*control, "control", issues);
    s.spec.gate = parse_gate(rc.object("gate"), "control.gate", issues);
    s.spec.pq = parse_pq(rc.object("pq"), "control.pq", issues);
    s.spec.lvrt = parse_lvrt(rc.object("lvrt"), "control.lvrt", issues);
    s.spec.freq = parse_freq(rc.object("freq"), "control.freq", issues);
    s.spec.p_ref_base = rc.num("p_ref_base", 0.0);
    s.spec.q_ref_base = rc.num("q_ref_base", 0.0);
    rc.finish();
  } else {
    s.spec.gate = parse_gate(nullptr, "", issues);
    s.spec.pq = parse_pq(nullptr, "", issues);
    s.spec.lvrt = parse_lvrt(nullptr, "", issues);
    s.spec.freq = parse_freq(nullptr, "", issues);
  }

  if (const json* grid = root.object("grid")) {
    Reader rg(*grid, "grid", issues);
    s.spec.sfr = parse_sfr(rg.object("sfr"), "grid.sfr", issues);
    s.spec.disturbances =
        parse_disturbances(rg.array("disturbances"), "grid.disturbances",
                           issues);
    rg.finish();
  } else {
    s.spec.sfr = parse_sfr(nullptr, "", issues);
  }

  s.sim = parse_sim(root.object("sim"), "sim", issues);
  root.finish();

  // Initial condition: exactly one form, mapped through the active model.
  if (s.initial_voltage && s.initial_soc)
    issues.push_back(
        "bank: initial_voltage and initial_soc are mutually exclusive");
  if (!s.initial_voltage && !s.initial_soc)
    issues.push_back("bank: one of initial_voltage / initial_soc is required");
  if (issues.empty()) {
    if (s.initial_voltage) {
      s.spec.u0 = *s.initial_voltage;
    } else {
      const CellModel m = make_cell_model(s.spec.bank.cell, s.spec.variant);
      s.spec.u0 = std::visit(
          [&](const auto& p) { return voltage_for_soc(p, *s.initial_soc); },
          m);
      if (*s.initial_soc < 0.0 || *s.initial_soc > 1.0)
        issues.push_back("bank.initial_soc: must be in [0, 1]");
    }
  }

  if (issues.empty()) {
    auto spec_issues = validate(s.spec);
    auto sim_issues = validate(s.sim);
    issues.insert(issues.end(), spec_issues.begin(), spec_issues.end());
    issues.insert(issues.end(), sim_issues.begin(), sim_issues.end());
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  return parse_scenario(read_json_file(path));
}

json to_json(const Scenario& s) {
  json cell{{"c0", s.spec.bank.cell.c0},
            {"kv", s.spec.bank.cell.kv},
            {"rs", s.spec.bank.cell.rs},
            {"rdc", s.spec.bank.cell.rdc},
            {"n_groups", s.spec.bank.cell.n_groups},
            {"u_rated", s.spec.bank.cell.u_rated}};
  if (!s.spec.bank.cell.slow_branches.empty()) {
    json arr = json::array();
    for (const auto& b : s.spec.bank.cell.slow_branches)
      arr.push_back({{"r", b.r}, {"c", b.c}});
    cell["slow_branches"] = arr;
  }
  if (s.spec.bank.cell.leak_resistance)
    cell["leak_resistance"] = *s.spec.bank.cell.leak_resistance;
  if (s.spec.bank.cell.tau_law)
    cell["tau_law"] = {{"tau0", s.spec.bank.cell.tau_law->tau0},
                       {"k_tau", s.spec.bank.cell.tau_law->k_tau}};

  json bank{{"cell", cell},
            {"n_series", s.spec.bank.n_s},
            {"n_parallel", s.spec.bank.n_p},
            {"p_rated_mw", s.spec.bank.p_rated / 1e6}};
  if (s.initial_voltage) bank["initial_voltage"] = *s.initial_voltage;
  if (s.initial_soc) bank["initial_soc"] = *s.initial_soc;

  json disturbances = json::array();
  for (const auto& d : s.spec.disturbances) {
    json jd{{"kind", to_string(d.kind)},
            {"t_start", d.t_start},
            {"magnitude", d.magnitude}};
    if (d.kind == DisturbanceKind::VoltageDip) {
      jd["duration"] = d.duration;
      jd["accel"] = d.accel_pu;
    }
    disturbances.push_back(jd);
  }

  return json{
      {"schema", kScenarioSchema},
      {"model", {{"variant", to_string(s.spec.variant)}}},
      {"bank", bank},
      {"control",
       {{"gate",
         {{"u_ch_max", s.spec.gate.u_ch_max},
          {"u_ch_start", s.spec.gate.u_ch_start},
          {"u_dch_min", s.spec.gate.u_dch_min},
          {"u_dch_start", s.spec.gate.u_dch_start},
          {"i_ch_max", s.spec.gate.i_ch_max},
          {"i_dch_max", s.spec.gate.i_dch_max}}},
        {"pq",
         {{"kp_d", s.spec.pq.kp_d},
          {"ki_d", s.spec.pq.ki_d},
          {"kp_q", s.spec.pq.kp_q},
          {"ki_q", s.spec.pq.ki_q},
          {"tau_c", s.spec.pq.tau_c},
          {"i_max", s.spec.pq.i_max},
          {"q_mode", s.spec.pq.q_mode == QMode::ReactivePower
                         ? "reactive-power"
                         : "terminal-voltage"}}},
        {"lvrt",
         {{"v_enter", s.spec.lvrt.v_enter},
          {"v_exit", s.spec.lvrt.v_exit},
          {"k_q", s.spec.lvrt.k_q},
          {"v_ref", s.spec.lvrt.v_ref}}},
        {"freq",
         {{"k_vir", s.spec.freq.k_vir},
          {"tau_w_inertial", s.spec.freq.tau_w_i},
          {"k_quasi_droop", s.spec.freq.k_qd},
          {"tau_w_droop", s.spec.freq.tau_w_d},
          {"tau_pll", s.spec.freq.tau_pll},
          {"deadband", s.spec.freq.deadband}}},
        {"p_ref_base", s.spec.p_ref_base},
        {"q_ref_base", s.spec.q_ref_base}}},
      {"grid",
       {{"sfr",
         {{"f_nom", s.spec.sfr.f_nom},
          {"h", s.spec.sfr.h},
          {"d", s.spec.sfr.d},
          {"r", s.spec.sfr.r},
          {"tau_g", s.spec.sfr.tau_g},
          {"tau_r", s.spec.sfr.tau_r},
          {"k_r", s.spec.sfr.k_r},
          {"s_base_mva", s.spec.sfr.s_base / 1e6}}},
        {"disturbances", disturbances}}},
      {"sim",
       {{"dt", s.sim.dt},
        {"t_end", s.sim.t_end},
        {"method", to_string(s.sim.method)},
        {"record_decimation", s.sim.record_decimation}}}};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ValidationError({path.string() + ": " + e.what()});
  }
  return j;
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace scsim
