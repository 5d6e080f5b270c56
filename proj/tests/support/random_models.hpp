// Copyright 2026 The misspec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Test-only generators of small random LP models and helpers that evaluate
// LP quantities by brute force over enumerate_vertices.

#include <algorithm>
#include <limits>
#include <random>
#include <vector>

#include "misspec/lp.hpp"

namespace misspec::testing {

/// 2-4 variables, 3-8 rows, finite box on every variable. Rows are built
/// around a random interior point, so the model is feasible unless
/// `allow_infeasible` injects a contradictory pair of rows.
inline LpModel random_small_model(std::mt19937_64& gen,
                                  bool allow_infeasible = false) {
  std::uniform_int_distribution<int> nv(2, 4);
  std::uniform_int_distribution<int> nr(3, 8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n = nv(gen);
  const int m = nr(gen);
  LpBuilder b(static_cast<std::size_t>(n));
  std::vector<double> x0(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double lo = -2.0 * unit(gen);
    const double hi = 0.5 + 1.5 * unit(gen);
    b.set_bounds(static_cast<std::size_t>(j), lo, hi);
    x0[static_cast<std::size_t>(j)] = lo + (hi - lo) * (0.25 + 0.5 * unit(gen));
  }
  for (int i = 0; i < m; ++i) {
    std::vector<double> a(static_cast<std::size_t>(n));
    double ax = 0.0;
    for (int j = 0; j < n; ++j) {
      a[static_cast<std::size_t>(j)] = u(gen);
      ax += a[static_cast<std::size_t>(j)] * x0[static_cast<std::size_t>(j)];
    }
    const double pick = unit(gen);
    if (pick < 0.7) {
      b.add_row(a, RowSense::kLessEqual, ax + 0.5 * unit(gen));
    } else if (pick < 0.92) {
      b.add_row(a, RowSense::kGreaterEqual, ax - 0.5 * unit(gen));
    } else {
      b.add_row(a, RowSense::kEqual, ax);
    }
  }
  if (allow_infeasible && unit(gen) < 0.2) {
    std::vector<double> a(static_cast<std::size_t>(n), 0.0);
    a[0] = 1.0;
    b.add_row(a, RowSense::kGreaterEqual, 5.0);  // beyond every box
  }
  return b.build();
}

inline std::vector<double> random_direction(std::mt19937_64& gen, std::size_t n) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = g(gen);
  return v;
}

inline double dot(const std::vector<double>& a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double vertex_max(const std::vector<std::vector<double>>& verts,
                         std::span<const double> c) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& v : verts) best = std::max(best, dot(v, c));
  return best;
}

/// min of `secondary` over vertices whose `primary` value is within the
/// face tolerance 1e-7 (1 + |max|) of the maximum.
inline double vertex_face_min(const std::vector<std::vector<double>>& verts,
                              std::span<const double> primary,
                              std::span<const double> secondary) {
  const double top = vertex_max(verts, primary);
  const double eps = 1e-7 * (1.0 + std::abs(top));
  double best = std::numeric_limits<double>::infinity();
  for (const auto& v : verts) {
    if (dot(v, primary) >= top - eps) best = std::min(best, dot(v, secondary));
  }
  return best;
}

}  // namespace misspec::testing
