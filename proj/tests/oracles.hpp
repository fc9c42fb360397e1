/*
 * Copyright (c) 2026 the scsim authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

// Test-only reference computations, kept independent of the library's
// closed-form implementations.

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>

namespace oracles {

/// Composite Simpson quadrature of f over [a, b].
inline double simpson(const std::function<double(double)>& f, double a,
                      double b, int intervals = 2000) {
  const int n = intervals % 2 == 0 ? intervals : intervals + 1;
  const double h = (b - a) / n;
  double sum = f(a) + f(b);
  for (int i = 1; i < n; ++i) sum += f(a + i * h) * (i % 2 == 0 ? 2.0 : 4.0);
  return sum * h / 3.0;
}

/// Trapezoid rule over sampled data with uniform spacing dt.
inline double trapezoid(std::span<const double> y, double dt) {
  if (y.size() < 2) return 0.0;
  double sum = 0.5 * (y.front() + y.back());
  for (std::size_t i = 1; i + 1 < y.size(); ++i) sum += y[i];
  return sum * dt;
}

/// FNV-1a over raw bytes; used for bit-identical determinism checks.
inline std::uint64_t fnv1a(const void* data, std::size_t size,
                           std::uint64_t seed = 1469598103934665603ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

inline std::uint64_t fnv1a(std::span<const double> v,
                           std::uint64_t seed = 1469598103934665603ull) {
  return fnv1a(v.data(), v.size() * sizeof(double), seed);
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

}  // namespace oracles
