// Copyright 2026 The misspec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Dense primal simplex over a constraint-matrix polytope, plus the
// lexicographic second stage that minimizes a secondary objective over the
// optimal face of a primary one.

#include <cstddef>
#include <initializer_list>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace misspec {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense { kLessEqual, kGreaterEqual, kEqual };
enum class LpStatus { kOptimal, kInfeasible, kUnbounded };
enum class Sense { kMaximize, kMinimize };

const char* to_string(LpStatus status);

/// Rows sum_j a_ij x_j (<=, >=, =) b_i with per-variable bounds. Immutable
/// once constructed; use LpBuilder to assemble one incrementally.
class LpModel {
 public:
  /// row_coeffs is row-major, num_rows x num_vars. Empty lower/upper mean
  /// the MPS default [0, +inf).
  LpModel(std::size_t num_vars, std::vector<double> row_coeffs,
          std::vector<RowSense> row_senses, std::vector<double> rhs,
          std::vector<double> lower_bounds = {},
          std::vector<double> upper_bounds = {});

  std::size_t num_vars() const noexcept { return num_vars_; }
  std::size_t num_rows() const noexcept { return senses_.size(); }

  std::span<const double> row(std::size_t i) const {
    return {coeffs_.data() + i * num_vars_, num_vars_};
  }
  RowSense sense(std::size_t i) const { return senses_[i]; }
  double rhs(std::size_t i) const { return rhs_[i]; }
  double lower(std::size_t j) const { return lower_[j]; }
  double upper(std::size_t j) const { return upper_[j]; }

  std::span<const double> coefficients() const noexcept { return coeffs_; }
  std::span<const RowSense> senses() const noexcept { return senses_; }
  std::span<const double> rhs_values() const noexcept { return rhs_; }
  std::span<const double> lower_bounds() const noexcept { return lower_; }
  std::span<const double> upper_bounds() const noexcept { return upper_; }

  /// Largest violation of any row or bound, each row's violation divided
  /// by max(1, ||row||).
  double max_violation(std::span<const double> point) const;

  /// max_violation(point) <= tol (default: the kernel feasibility tolerance).
  bool contains(std::span<const double> point, double tol = 1e-8) const;

 private:
  std::size_t num_vars_;
  std::vector<double> coeffs_;
  std::vector<RowSense> senses_;
  std::vector<double> rhs_;
  std::vector<double> lower_;
  std::vector<double> upper_;
};

class LpBuilder {
 public:
  explicit LpBuilder(std::size_t num_vars);

  LpBuilder& add_row(std::span<const double> coeffs, RowSense sense,
                     double rhs);
  LpBuilder& add_row(std::initializer_list<double> coeffs, RowSense sense,
                     double rhs) {
    return add_row(std::span<const double>(coeffs.begin(), coeffs.size()),
                   sense, rhs);
  }
  LpBuilder& set_bounds(std::size_t var, double lower, double upper);
  LpBuilder& set_all_bounds(double lower, double upper);

  LpModel build() const;

 private:
  std::size_t num_vars_;
  std::vector<double> coeffs_;
  std::vector<RowSense> senses_;
  std::vector<double> rhs_;
  std::vector<double> lower_;
  std::vector<double> upper_;
};

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> point;   // empty unless kOptimal
  std::optional<double> value;  // engaged iff kOptimal

  bool optimal() const noexcept { return status == LpStatus::kOptimal; }
};

struct FaceSolution {
  LpSolution primary;    // maximum of the primary objective
  LpSolution secondary;  // minimum of the secondary over the primary's face
};

/// An LpModel converted to standard form with a feasible basis already
/// found. Phase one runs once in the constructor; each query copies the
/// feasible tableau and runs phase two from it, so one PreparedLp can serve
/// many objectives and many threads concurrently.
class PreparedLp {
 public:
  explicit PreparedLp(const LpModel& model);
  ~PreparedLp();
  PreparedLp(PreparedLp&&) noexcept;
  PreparedLp& operator=(PreparedLp&&) noexcept;

  std::size_t num_vars() const noexcept;
  bool feasible() const noexcept;

  LpSolution solve(std::span<const double> objective, Sense sense) const;

  /// Maximizes `primary`, then minimizes `secondary` over
  /// {x feasible : |primary.x - max| <= 1e-7 (1 + |max|)}.
  FaceSolution solve_face(std::span<const double> primary,
                          std::span<const double> secondary) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Throws ArgumentError on a length mismatch and NumericalError when the
/// iteration cap 50 (rows + vars) is hit.
LpSolution solve_lp(const LpModel& model, std::span<const double> objective,
                    Sense sense);

/// Minimum of `secondary` over the maximizing face of `primary`. When the
/// first stage is not optimal its status is returned unchanged.
LpSolution solve_second_stage(const LpModel& model,
                              std::span<const double> primary,
                              std::span<const double> secondary);

/// Every basic feasible point, deduplicated within 1e-9 and sorted
/// lexicographically. Brute force over active sets; only for small models
/// (num_vars <= 6, rows + finite bounds <= 24).
std::vector<std::vector<double>> enumerate_vertices(const LpModel& model);

}  // namespace misspec
