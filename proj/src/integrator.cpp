/*
 * Copyright (c) 2026 the scsim authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "scsim/integrator.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace scsim {

const char* to_string(Method m) {
  switch (m) {
    case Method::Rk4: return "rk4";
    case Method::Trapezoidal: return "trapezoidal";
    case Method::Euler: return "euler";
  }
  return "?";
}

bool method_from_string(const std::string& name, Method& out) {
  if (name == "rk4") out = Method::Rk4;
  else if (name == "trapezoidal") out = Method::Trapezoidal;
  else if (name == "euler") out = Method::Euler;
  else return false;
  return true;
}

Eigen::VectorXd euler_step(const DerivFn& f, double t, const Eigen::VectorXd& x,
                           double dt) {
  return x + dt * f(t, x);
}

namespace {

Eigen::MatrixXd numeric_jacobian(const DerivFn& f, double t,
                                 const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& fx) {
  const auto n = x.size();
  Eigen::MatrixXd jac(n, n);
  Eigen::VectorXd xp = x;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double h = 1e-7 * std::max(1.0, std::abs(x[j]));
    xp[j] = x[j] + h;
    jac.col(j) = (f(t, xp) - fx) / h;
    xp[j] = x[j];
  }
  return jac;
}

}  // namespace

Eigen::VectorXd trapezoidal_step(const DerivFn& f, double t,
                                 const Eigen::VectorXd& x, double dt) {
  const Eigen::VectorXd f0 = f(t, x);
  const double t1 = t + dt;
  // Heun predictor, then Newton on g(y) = y - x - dt/2*(f0 + f(t1, y)).
  Eigen::VectorXd y = x + dt * f0;
  const Eigen::Index n = x.size();
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  for (int it = 0; it < 25; ++it) {
    const Eigen::VectorXd fy = f(t1, y);
    const Eigen::VectorXd g = y - x - 0.5 * dt * (f0 + fy);
    if (g.cwiseAbs().maxCoeff() <
        1e-13 * std::max(1.0, x.cwiseAbs().maxCoeff()))
      break;
    const Eigen::MatrixXd jg = eye - 0.5 * dt * numeric_jacobian(f, t1, y, fy);
    y -= jg.partialPivLu().solve(g);
  }
  return y;
}

Eigen::VectorXd integrate_step(Method m, const DerivFn& f, double t,
                               const Eigen::VectorXd& x, double dt) {
  switch (m) {
    case Method::Rk4: return rk4_step(f, t, x, dt);
    case Method::Trapezoidal: return trapezoidal_step(f, t, x, dt);
    case Method::Euler: return euler_step(f, t, x, dt);
  }
  return x;
}

}  // namespace scsim
