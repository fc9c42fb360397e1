/*
 * Copyright (c) 2026 the scsim authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "scsim/cell.hpp"
#include "scsim/integrator.hpp"

using namespace scsim;

namespace {

CellParams plain_cell(double c0, double kv, double rs = 0.0, double rdc = 0.0,
                      int n_groups = 0, double u_rated = 2.7) {
  CellParams p;
  p.c0 = c0;
  p.kv = kv;
  p.rs = rs;
  p.rdc = rdc;
  p.n_groups = n_groups;
  p.u_rated = u_rated;
  return p;
}

}  // namespace

TEST_CASE("capacitance is affine in voltage") {
  CHECK(capacitance(plain_cell(600, 150), 2.0) == doctest::Approx(900.0));
  CHECK(capacitance(plain_cell(900, 40), 0.0) == doctest::Approx(900.0));
  CHECK(capacitance(plain_cell(750, 90), 2.7) == doctest::Approx(993.0));
  CHECK_THROWS_AS(capacitance(plain_cell(600, 150), -0.1), std::domain_error);
}

TEST_CASE("tau from the datasheet resistances") {
  // c0 chosen so C(u) = 1000 F at the probe voltage
  auto p = plain_cell(1000, 0, 0.25e-3, 0.5e-3);
  CHECK(tau_of_voltage(p, 0.0) == doctest::Approx(0.75));

  auto zero_gap = plain_cell(1000, 0, 0.3e-3, 0.3e-3);
  CHECK(tau_of_voltage(zero_gap, 1.7) == 0.0);

  auto maxwell_like = plain_cell(900, 0, 0.25e-3, 2.75e-3);
  CHECK(tau_of_voltage(maxwell_like, 0.0) == doctest::Approx(6.75));
}

TEST_CASE("tau override uses the linear law") {
  auto p = plain_cell(1000, 0, 0.25e-3, 0.5e-3);
  p.tau_law = LinearTau{0.5, 0.1};
  CHECK(tau_of_voltage(p, 2.0) == doctest::Approx(0.7));
}

TEST_CASE("group parameters share C/2 and fall as 1/k^2") {
  auto p = plain_cell(1000, 0, 0.25e-3, 0.5e-3, 5);
  const auto g1 = group_params(p, 0.0, 1);
  CHECK(g1.r == doctest::Approx(1.5199e-4).epsilon(1e-4));
  CHECK(g1.c == doctest::Approx(500.0));
  const auto g2 = group_params(p, 0.0, 2);
  CHECK(g2.r == doctest::Approx(g1.r / 4.0));
  CHECK(g2.c == doctest::Approx(500.0));

  auto zero_gap = plain_cell(1000, 0, 0.3e-3, 0.3e-3, 2);
  const auto g = group_params(zero_gap, 1.0, 1);
  CHECK(g.r == 0.0);
  CHECK(g.c == doctest::Approx(500.0));

  CHECK_THROWS_AS(group_params(p, 0.0, 0), std::out_of_range);
  CHECK_THROWS_AS(group_params(p, 0.0, 6), std::out_of_range);
}

TEST_CASE("cell derivatives at equilibrium and under the 30 A test current") {
  auto p = plain_cell(600, 150, 0.25e-3, 0.5e-3, 2);
  CellState s = initial_cell_state(CellModel{p}, 2.0);

  const CellState d0 = cell_derivatives(p, s, 0.0);
  CHECK(d0.u_c == 0.0);
  CHECK(d0.u_groups.cwiseAbs().maxCoeff() == 0.0);

  const CellState d = cell_derivatives(p, s, 30.0);
  CHECK(d.u_c == doctest::Approx(30.0 / 900.0));
}

TEST_CASE("group voltage decays exponentially at open circuit") {
  auto p = plain_cell(1000, 0, 0.25e-3, 0.5e-3, 1);
  const CellModel m{p};
  CellState s = initial_cell_state(m, 1.5);
  s.u_groups[0] = 0.1;

  const double tau_k = tau_of_voltage(p, 1.5) /
                       (std::numbers::pi * std::numbers::pi);
  const DerivFn f = [&](double, const Eigen::VectorXd& x) {
    return to_vector(cell_derivatives(p, cell_state_from_vector(m, x), 0.0));
  };
  Eigen::VectorXd x = to_vector(s);
  const double dt = 1e-3;
  const double t_end = 5.0 * tau_k;
  const auto n = static_cast<int>(t_end / dt);
  for (int k = 0; k < n; ++k) x = rk4_step(f, k * dt, x, dt);

  const double expected = 0.1 * std::exp(-(n * dt) / tau_k);
  CHECK(oracles::rel_err(x[1], expected) < 1e-6);
  CHECK(std::abs(x[1]) < 0.01 * 0.1);  // below 1% after 5 time constants
}

TEST_CASE("terminal voltage and the ESR jump") {
  auto p = plain_cell(600, 150, 0.25e-3, 0.5e-3, 2);
  CellState s = initial_cell_state(CellModel{p}, 2.0);
  CHECK(terminal_voltage(p, s, 0.0) == doctest::Approx(2.0));
  CHECK(terminal_voltage(p, s, 250.0) == doctest::Approx(2.0625));

  // a current step of dI moves the terminal voltage by exactly rs*dI
  const double di = 137.5;
  CHECK(terminal_voltage(p, s, 100.0 + di) - terminal_voltage(p, s, 100.0) ==
        doctest::Approx(p.rs * di).epsilon(1e-14));
}

TEST_CASE("stored energy and charge match quadrature") {
  auto p = plain_cell(600, 150);
  CHECK(stored_energy(p, 2.7) == doctest::Approx(3171.15));
  CHECK(stored_energy(p, 0.0) == 0.0);
  CHECK(stored_energy(plain_cell(900, 0), 2.7) == doctest::Approx(3280.5));
  CHECK(stored_charge(p, 2.7) == doctest::Approx(2166.75));
  CHECK(stored_charge(p, 0.0) == 0.0);

  std::mt19937 rng(42);
  std::uniform_real_distribution<double> c0d(100.0, 3000.0);
  std::uniform_real_distribution<double> kvd(0.0, 500.0);
  std::uniform_real_distribution<double> ud(0.0, 3.0);
  for (int it = 0; it < 100; ++it) {
    auto q = plain_cell(c0d(rng), kvd(rng));
    const double u = ud(rng);
    const double e_ref = oracles::simpson(
        [&](double v) { return v * (q.c0 + q.kv * v); }, 0.0, u);
    const double q_ref =
        oracles::simpson([&](double v) { return q.c0 + q.kv * v; }, 0.0, u);
    CHECK(std::abs(stored_energy(q, u) - e_ref) <=
          1e-9 * std::max(1.0, std::abs(e_ref)));
    CHECK(std::abs(stored_charge(q, u) - q_ref) <=
          1e-9 * std::max(1.0, std::abs(q_ref)));
  }
}

TEST_CASE("soc is the stored-energy fraction") {
  auto p = plain_cell(900, 40, 0, 0, 0, 2.7);
  CHECK(soc(p, 2.7).value == doctest::Approx(1.0));
  CHECK(soc(p, 0.0).value == 0.0);
  CHECK(soc(p, 1.08).value == doctest::Approx(0.153).epsilon(5e-3));
  CHECK_FALSE(soc(p, 1.08).clamped);

  const Soc above = soc(p, 2.75);
  CHECK(above.value == 1.0);
  CHECK(above.clamped);
}

TEST_CASE("voltage_for_soc inverts soc") {
  auto p = plain_cell(600, 150, 0, 0, 0, 2.7);
  for (double target : {0.05, 0.153, 0.5, 0.9, 1.0}) {
    const double u = voltage_for_soc(p, target);
    CHECK(soc(p, u).value == doctest::Approx(target).epsilon(1e-9));
  }
}

TEST_CASE("ideal reductions pick the capacitance at the anchor voltage") {
  auto p = plain_cell(600, 150, 0.25e-3, 0.5e-3, 1, 2.7);
  CHECK(ideal_from(p, IdealVariant::AtRated).c == doctest::Approx(1005.0));
  CHECK(ideal_from(p, IdealVariant::AtZeroVolts).c == doctest::Approx(600.0));
  CHECK(ideal_from(p, IdealVariant::AtHalfRated).c == doctest::Approx(802.5));

  // no ESR, no groups: terminal voltage is the state itself
  const IdealCellParams ideal = ideal_from(p, IdealVariant::AtHalfRated);
  CellState s = initial_cell_state(CellModel{ideal}, 2.0);
  CHECK(terminal_voltage(ideal, s, 400.0) == doctest::Approx(2.0));
  CHECK(cell_derivatives(ideal, s, 400.0).u_c ==
        doctest::Approx(400.0 / 802.5));
}

TEST_CASE("ideal-at-rated always overestimates the stored energy") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> c0d(100.0, 3000.0);
  std::uniform_real_distribution<double> kvd(10.0, 500.0);
  std::uniform_real_distribution<double> urd(2.0, 3.0);
  std::uniform_real_distribution<double> frac(1e-6, 1.0);
  for (int it = 0; it < 1000; ++it) {
    auto p = plain_cell(c0d(rng), kvd(rng), 0, 0, 0, urd(rng));
    const double u = frac(rng) * p.u_rated;
    const IdealCellParams ideal = ideal_from(p, IdealVariant::AtRated);
    const double gap = stored_energy(ideal, u) - stored_energy(p, u);
    CHECK(gap > 0.0);
    // closed form of the gap
    CHECK(oracles::rel_err(gap, p.kv * u * u * (p.u_rated / 2.0 - u / 3.0)) <
          1e-9);
  }
}

TEST_CASE("charge conservation along a simulated trajectory") {
  auto p = plain_cell(600, 150, 0.25e-3, 0.5e-3, 1);
  const CellModel m{p};
  Eigen::VectorXd x = to_vector(initial_cell_state(m, 1.5));
  const double dt = 1e-3;
  // piecewise-constant current, held fixed across each step
  for (const auto& [seconds, amps] :
       {std::pair{4.0, 25.0}, std::pair{3.0, -10.0}}) {
    const double i = amps;
    const DerivFn f = [&](double, const Eigen::VectorXd& v) {
      return to_vector(cell_derivatives(p, cell_state_from_vector(m, v), i));
    };
    const int n = static_cast<int>(seconds / dt);
    for (int k = 0; k < n; ++k) x = rk4_step(f, k * dt, x, dt);
  }

  const double delivered = 25.0 * 4.0 - 10.0 * 3.0;  // integral of i dt
  const double dq = stored_charge(p, x[0]) - stored_charge(p, 1.5);
  CHECK(oracles::rel_err(dq, delivered) < 1e-6);
}

TEST_CASE("slow branches divert current and relax toward the terminal") {
  auto p = plain_cell(600, 150, 0.25e-3, 0.5e-3, 1);
  p.slow_branches = {{2.0, 50.0}};
  p.leak_resistance = 1000.0;
  const CellModel m{p};

  // at rest and fully relaxed nothing moves except the leak discharge
  CellState s = initial_cell_state(m, 2.0);
  const CellState d = cell_derivatives(p, s, 0.0);
  CHECK(d.u_slow[0] == doctest::Approx(0.0));
  CHECK(d.u_c == doctest::Approx(-2.0 / 1000.0 / capacitance(p, 2.0)));

  // a depleted slow branch pulls charge out of the fast branch
  s.u_slow[0] = 1.0;
  const CellState d2 = cell_derivatives(p, s, 0.0);
  CHECK(d2.u_slow[0] > 0.0);
  CHECK(d2.u_c < 0.0);
}

TEST_CASE("cell state round-trips through the flat vector") {
  auto p = plain_cell(600, 150, 0.25e-3, 0.5e-3, 3);
  p.slow_branches = {{2.0, 50.0}, {5.0, 30.0}};
  const CellModel m{p};
  CHECK(cell_state_size(m) == 6);
  CellState s = initial_cell_state(m, 1.9);
  s.u_groups << 0.01, 0.02, 0.03;
  const CellState back = cell_state_from_vector(m, to_vector(s));
  CHECK(back.u_c == s.u_c);
  CHECK((back.u_groups - s.u_groups).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.u_slow - s.u_slow).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("parameter validation names each violation") {
  CellParams p;  // everything zero: c0, u_rated invalid
  auto issues = validate(p);
  CHECK(issues.size() >= 2);

  auto q = plain_cell(600, 150, 2e-3, 1e-3, 1);  // rdc < rs
  q.n_groups = 7;
  issues = validate(q);
  REQUIRE(issues.size() == 2);
  CHECK(issues[0].find("rdc") != std::string::npos);
  CHECK(issues[1].find("n_groups") != std::string::npos);
}
