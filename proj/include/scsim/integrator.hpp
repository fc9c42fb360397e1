/*
 * Copyright (c) 2026 the scsim authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <Eigen/Core>

#include <functional>
#include <string>

namespace scsim {

enum class Method { Rk4, Trapezoidal, Euler };

const char* to_string(Method m);
bool method_from_string(const std::string& name, Method& out);

/// Classic fourth-order Runge-Kutta step; works for any Eigen vector type.
template <typename Vec, typename F>
Vec rk4_step(F&& f, double t, const Vec& x, double dt) {
  const Vec k1 = f(t, x);
  const Vec k2 = f(t + 0.5 * dt, Vec(x + 0.5 * dt * k1));
  const Vec k3 = f(t + 0.5 * dt, Vec(x + 0.5 * dt * k2));
  const Vec k4 = f(t + dt, Vec(x + dt * k3));
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

using DerivFn =
    std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>;

Eigen::VectorXd euler_step(const DerivFn& f, double t, const Eigen::VectorXd& x,
                           double dt);

/// Implicit trapezoidal rule, solved by Newton iteration with a
/// forward-difference Jacobian. A-stable; intended for stiff RC groups.
Eigen::VectorXd trapezoidal_step(const DerivFn& f, double t,
                                 const Eigen::VectorXd& x, double dt);

Eigen::VectorXd integrate_step(Method m, const DerivFn& f, double t,
                               const Eigen::VectorXd& x, double dt);

}  // namespace scsim
