/*
 * Copyright (c) 2026 the scsim authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "scsim/integrator.hpp"

using namespace scsim;

namespace {

const DerivFn decay = [](double, const Eigen::VectorXd& x) {
  return (-x).eval();
};

double integrate_decay(Method m, double dt, double t_end) {
  Eigen::VectorXd x = Eigen::VectorXd::Ones(1);
  const auto n = static_cast<long>(std::llround(t_end / dt));
  for (long k = 0; k < n; ++k) x = integrate_step(m, decay, k * dt, x, dt);
  return x[0];
}

double observed_order(Method m, double dt) {
  const double exact = std::exp(-1.0);
  const double e1 = std::abs(integrate_decay(m, dt, 1.0) - exact);
  const double e2 = std::abs(integrate_decay(m, dt / 2.0, 1.0) - exact);
  return std::log2(e1 / e2);
}

}  // namespace

TEST_CASE("rk4 solves exponential decay to high accuracy") {
  const double got = integrate_decay(Method::Rk4, 1e-3, 1.0);
  CHECK(oracles::rel_err(got, std::exp(-1.0)) < 1e-8);
}

TEST_CASE("observed convergence orders") {
  CHECK(observed_order(Method::Rk4, 0.02) >= 3.8);
  CHECK(observed_order(Method::Trapezoidal, 0.02) >= doctest::Approx(1.9));
  CHECK(observed_order(Method::Euler, 0.02) >= doctest::Approx(0.9));
  CHECK(observed_order(Method::Euler, 0.02) <= doctest::Approx(1.1));
}

TEST_CASE("trapezoidal stays stable on a stiff problem") {
  // dt/tau = 50: far outside the explicit stability region
  const DerivFn stiff = [](double, const Eigen::VectorXd& x) {
    return (-5000.0 * x).eval();
  };
  Eigen::VectorXd x = Eigen::VectorXd::Ones(1);
  for (int k = 0; k < 100; ++k)
    x = trapezoidal_step(stiff, k * 0.01, x, 0.01);
  CHECK(std::abs(x[0]) < 1.0);  // decays, never blows up

  Eigen::VectorXd y = Eigen::VectorXd::Ones(1);
  y = rk4_step(stiff, 0.0, y, 0.01);
  CHECK(std::abs(y[0]) > 1.0);  // the explicit method diverges here
}

TEST_CASE("trapezoidal handles a nonlinear right-hand side") {
  // du/dt = -u^2, u(0)=1 has the closed form 1/(1+t)
  const DerivFn f = [](double, const Eigen::VectorXd& x) {
    return (-x.array().square()).matrix().eval();
  };
  Eigen::VectorXd x = Eigen::VectorXd::Ones(1);
  const double dt = 1e-3;
  for (int k = 0; k < 1000; ++k) x = trapezoidal_step(f, k * dt, x, dt);
  CHECK(oracles::rel_err(x[0], 0.5) < 1e-6);
}

TEST_CASE("method names round-trip") {
  Method m{};
  CHECK(method_from_string("rk4", m));
  CHECK(m == Method::Rk4);
  CHECK(method_from_string("trapezoidal", m));
  CHECK(method_from_string("euler", m));
  CHECK_FALSE(method_from_string("rk5", m));
  CHECK(std::string(to_string(Method::Trapezoidal)) == "trapezoidal");
}

TEST_CASE("rk4 works on multi-dimensional rotating systems") {
  // harmonic oscillator keeps its radius
  const DerivFn rot = [](double, const Eigen::VectorXd& x) {
    return Eigen::Vector2d(-x[1], x[0]).eval();
  };
  Eigen::VectorXd x = Eigen::Vector2d(1.0, 0.0);
  const double dt = 1e-3;
  const auto n = static_cast<long>(2.0 * std::numbers::pi / dt);
  for (long k = 0; k < n; ++k) x = rk4_step(rot, k * dt, x, dt);
  CHECK(oracles::rel_err(x.norm(), 1.0) < 1e-9);
}
