// Copyright 2026 The misspec Authors
// SPDX-License-Identifier: Apache-2.0

#include "misspec/lp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "misspec/errors.hpp"
#include "misspec/kernels.hpp"

namespace misspec {

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// LpModel

LpModel::LpModel(std::size_t num_vars, std::vector<double> row_coeffs,
                 std::vector<RowSense> row_senses, std::vector<double> rhs,
                 std::vector<double> lower_bounds,
                 std::vector<double> upper_bounds)
    : num_vars_(num_vars),
      coeffs_(std::move(row_coeffs)),
      senses_(std::move(row_senses)),
      rhs_(std::move(rhs)),
      lower_(std::move(lower_bounds)),
      upper_(std::move(upper_bounds)) {
  if (num_vars_ == 0) throw ArgumentError("LpModel: num_vars must be >= 1");
  if (rhs_.size() != senses_.size()) {
    throw ArgumentError("LpModel: rhs has " + std::to_string(rhs_.size()) +
                        " entries for " + std::to_string(senses_.size()) +
                        " rows");
  }
  if (coeffs_.size() != senses_.size() * num_vars_) {
    throw ArgumentError("LpModel: coefficient matrix is not rows x vars");
  }
  if (lower_.empty()) lower_.assign(num_vars_, 0.0);
  if (upper_.empty()) upper_.assign(num_vars_, kInf);
  if (lower_.size() != num_vars_ || upper_.size() != num_vars_) {
    throw ArgumentError("LpModel: bound vectors must have num_vars entries");
  }
  for (std::size_t j = 0; j < num_vars_; ++j) {
    if (std::isnan(lower_[j]) || std::isnan(upper_[j]) ||
        lower_[j] > upper_[j] || lower_[j] == kInf || upper_[j] == -kInf) {
      throw ArgumentError("LpModel: variable " + std::to_string(j) +
                          " has invalid bounds");
    }
  }
  for (double a : coeffs_) {
    if (!std::isfinite(a)) throw ArgumentError("LpModel: non-finite coefficient");
  }
  for (double b : rhs_) {
    if (!std::isfinite(b)) throw ArgumentError("LpModel: non-finite rhs");
  }
}

double LpModel::max_violation(std::span<const double> point) const {
  if (point.size() != num_vars_) {
    throw ArgumentError("LpModel::max_violation: dimension mismatch");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < num_rows(); ++i) {
    const auto a = row(i);
    double activity = 0.0;
    double norm = 0.0;
    for (std::size_t j = 0; j < num_vars_; ++j) {
      activity += a[j] * point[j];
      norm += a[j] * a[j];
    }
    double violation = 0.0;
    switch (senses_[i]) {
      case RowSense::kLessEqual:
        violation = activity - rhs_[i];
        break;
      case RowSense::kGreaterEqual:
        violation = rhs_[i] - activity;
        break;
      case RowSense::kEqual:
        violation = std::abs(activity - rhs_[i]);
        break;
    }
    worst = std::max(worst, violation / std::max(1.0, std::sqrt(norm)));
  }
  for (std::size_t j = 0; j < num_vars_; ++j) {
    worst = std::max(worst, lower_[j] - point[j]);
    worst = std::max(worst, point[j] - upper_[j]);
  }
  return worst;
}

bool LpModel::contains(std::span<const double> point, double tol) const {
  return max_violation(point) <= tol;
}

LpBuilder::LpBuilder(std::size_t num_vars)
    : num_vars_(num_vars), lower_(num_vars, 0.0), upper_(num_vars, kInf) {}

LpBuilder& LpBuilder::add_row(std::span<const double> coeffs, RowSense sense,
                              double rhs) {
  if (coeffs.size() != num_vars_) {
    throw ArgumentError("LpBuilder::add_row: expected " +
                        std::to_string(num_vars_) + " coefficients, got " +
                        std::to_string(coeffs.size()));
  }
  coeffs_.insert(coeffs_.end(), coeffs.begin(), coeffs.end());
  senses_.push_back(sense);
  rhs_.push_back(rhs);
  return *this;
}

LpBuilder& LpBuilder::set_bounds(std::size_t var, double lower, double upper) {
  if (var >= num_vars_) throw ArgumentError("LpBuilder::set_bounds: bad index");
  lower_[var] = lower;
  upper_[var] = upper;
  return *this;
}

LpBuilder& LpBuilder::set_all_bounds(double lower, double upper) {
  std::fill(lower_.begin(), lower_.end(), lower);
  std::fill(upper_.begin(), upper_.end(), upper);
  return *this;
}

LpModel LpBuilder::build() const {
  return LpModel(num_vars_, coeffs_, senses_, rhs_, lower_, upper_);
}

// ---------------------------------------------------------------------------
// Simplex kernel

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kReducedCostTol = 1e-9;
constexpr double kFeasibilityTol = 1e-8;
constexpr double kFaceTol = 1e-7;

// Dense tableau. Rows 0..rows-1 are constraints, row `rows` holds the
// reduced costs d_j of the current (maximization) objective with -z in the
// rhs slot.
struct Tableau {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t stride = 0;
  std::vector<double> data;
  std::vector<std::size_t> basis;

  Tableau() = default;
  Tableau(std::size_t r, std::size_t c)
      : rows(r), cols(c), stride(c + 1), data((r + 1) * (c + 1), 0.0),
        basis(r, 0) {}

  double* row(std::size_t i) { return data.data() + i * stride; }
  const double* row(std::size_t i) const { return data.data() + i * stride; }
  double* objective() { return row(rows); }
  double& rhs(std::size_t i) { return data[i * stride + cols]; }
  double rhs(std::size_t i) const { return data[i * stride + cols]; }

  void pivot(std::size_t r, std::size_t e) {
    const kernels::KernelTable& k = kernels::active();
    double* pr = row(r);
    k.scale(1.0 / pr[e], pr, stride);
    pr[e] = 1.0;
    for (std::size_t i = 0; i <= rows; ++i) {
      if (i == r) continue;
      double* ri = row(i);
      const double f = ri[e];
      if (f == 0.0) continue;
      k.axpy(-f, pr, ri, stride);
      ri[e] = 0.0;
    }
    basis[r] = e;
  }

  // Reduced costs of c (indexed by column) against the current basis.
  void load_objective(std::span<const double> c) {
    double* obj = objective();
    std::fill(obj, obj + stride, 0.0);
    std::copy(c.begin(), c.end(), obj);
    const kernels::KernelTable& k = kernels::active();
    for (std::size_t i = 0; i < rows; ++i) {
      const double cb = c[basis[i]];
      if (cb != 0.0) k.axpy(-cb, row(i), obj, stride);
    }
    for (std::size_t i = 0; i < rows; ++i) obj[basis[i]] = 0.0;
  }
};

enum class RunResult { kOptimal, kUnbounded };

struct IterationLimits {
  std::size_t bland_after;
  std::size_t cap;
};

// Primal simplex on a feasible tableau, maximizing the loaded objective.
// Dantzig pricing first, Bland's rule once `bland_after` pivots have been
// spent so degenerate cycling cannot persist.
// Columns with eligible[j] == 0 are held at zero (never enter).
RunResult run_simplex(Tableau& t, double cost_scale, IterationLimits limits,
                      const std::vector<char>* eligible = nullptr) {
  const double dtol = kReducedCostTol * std::max(1.0, cost_scale);
  for (std::size_t iter = 0;; ++iter) {
    if (iter >= limits.cap) {
      throw NumericalError("simplex iteration cap reached", iter);
    }
    const bool bland = iter >= limits.bland_after;
    const double* obj = t.objective();

    std::size_t entering = t.cols;
    double best = dtol;
    for (std::size_t j = 0; j < t.cols; ++j) {
      if (eligible != nullptr && !(*eligible)[j]) continue;
      if (obj[j] > best) {
        entering = j;
        if (bland) break;
        best = obj[j];
      }
    }
    if (entering == t.cols) return RunResult::kOptimal;

    std::size_t leaving = t.rows;
    double best_ratio = kInf;
    double best_pivot = 0.0;
    for (std::size_t i = 0; i < t.rows; ++i) {
      const double a = t.row(i)[entering];
      if (a <= kPivotTol) continue;
      const double ratio = std::max(t.rhs(i), 0.0) / a;
      if (leaving == t.rows) {
        leaving = i;
        best_ratio = ratio;
        best_pivot = a;
        continue;
      }
      const double slack = 1e-12 * (1.0 + best_ratio);
      if (ratio < best_ratio - slack) {
        leaving = i;
        best_ratio = ratio;
        best_pivot = a;
      } else if (ratio <= best_ratio + slack) {
        const bool take = bland ? t.basis[i] < t.basis[leaving] : a > best_pivot;
        if (take) {
          leaving = i;
          best_ratio = std::min(best_ratio, ratio);
          best_pivot = a;
        }
      }
    }
    if (leaving == t.rows) return RunResult::kUnbounded;
    t.pivot(leaving, entering);
  }
}

// x_j = offset + sign * y[pos] - y[neg]; neg is only used for free vars.
struct VarMap {
  double offset = 0.0;
  double sign = 1.0;
  std::size_t pos = 0;
  std::size_t neg = kNone;

  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);
};

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

struct PreparedLp::Impl {
  std::size_t num_vars = 0;
  std::size_t model_size = 0;  // rows + vars of the original model
  std::vector<VarMap> vars;
  bool feasible = false;
  Tableau base;  // feasible basis, no artificial columns

  IterationLimits limits() const {
    return {2 * model_size, 50 * model_size};
  }

  void check_objective(std::span<const double> c, const char* what) const {
    if (c.size() != num_vars) {
      throw ArgumentError(std::string(what) + ": objective has " +
                          std::to_string(c.size()) + " entries, model has " +
                          std::to_string(num_vars) + " variables");
    }
  }

  // Objective over tableau columns and the constant term from offsets.
  std::vector<double> column_costs(std::span<const double> c, double sign,
                                   std::size_t cols, double* constant) const {
    std::vector<double> out(cols, 0.0);
    double k = 0.0;
    for (std::size_t j = 0; j < num_vars; ++j) {
      const double cj = sign * c[j];
      k += cj * vars[j].offset;
      out[vars[j].pos] += cj * vars[j].sign;
      if (vars[j].neg != VarMap::kNone) out[vars[j].neg] -= cj;
    }
    if (constant != nullptr) *constant = k;
    return out;
  }

  std::vector<double> extract_point(const Tableau& t) const {
    std::vector<double> y(t.cols, 0.0);
    for (std::size_t i = 0; i < t.rows; ++i) y[t.basis[i]] = std::max(t.rhs(i), 0.0);
    std::vector<double> x(num_vars);
    for (std::size_t j = 0; j < num_vars; ++j) {
      const VarMap& m = vars[j];
      double v = m.offset + m.sign * y[m.pos];
      if (m.neg != VarMap::kNone) v -= y[m.neg];
      x[j] = v;
    }
    return x;
  }

  LpSolution finish(const Tableau& t, std::span<const double> objective) const {
    LpSolution sol;
    sol.status = LpStatus::kOptimal;
    sol.point = extract_point(t);
    double value = 0.0;
    for (std::size_t j = 0; j < num_vars; ++j) value += objective[j] * sol.point[j];
    sol.value = value;
    return sol;
  }

  // Phase two from the feasible base; leaves the optimal tableau in `t`.
  LpStatus maximize(Tableau& t, std::span<const double> objective,
                    double sign) const {
    t = base;
    const auto costs = column_costs(objective, sign, t.cols, nullptr);
    t.load_objective(costs);
    const RunResult r = run_simplex(t, max_abs(costs), limits());
    return r == RunResult::kOptimal ? LpStatus::kOptimal : LpStatus::kUnbounded;
  }

  void build(const LpModel& model);
};

void PreparedLp::Impl::build(const LpModel& model) {
  num_vars = model.num_vars();
  model_size = model.num_rows() + model.num_vars();

  // Variable substitution to y >= 0.
  vars.resize(num_vars);
  std::size_t structural = 0;
  std::vector<std::pair<std::size_t, double>> upper_rows;  // (column, width)
  for (std::size_t j = 0; j < num_vars; ++j) {
    const double lo = model.lower(j);
    const double hi = model.upper(j);
    VarMap& m = vars[j];
    if (std::isfinite(lo)) {
      m.offset = lo;
      m.sign = 1.0;
      m.pos = structural++;
      if (std::isfinite(hi)) upper_rows.emplace_back(m.pos, hi - lo);
    } else if (std::isfinite(hi)) {
      m.offset = hi;
      m.sign = -1.0;
      m.pos = structural++;
    } else {
      m.offset = 0.0;
      m.sign = 1.0;
      m.pos = structural++;
      m.neg = structural++;
    }
  }

  struct StdRow {
    std::vector<double> coeffs;  // over structural columns
    RowSense sense;
    double rhs;
  };
  std::vector<StdRow> std_rows;
  std_rows.reserve(model.num_rows() + upper_rows.size());
  for (std::size_t i = 0; i < model.num_rows(); ++i) {
    StdRow r{std::vector<double>(structural, 0.0), model.sense(i), model.rhs(i)};
    const auto a = model.row(i);
    for (std::size_t j = 0; j < num_vars; ++j) {
      if (a[j] == 0.0) continue;
      const VarMap& m = vars[j];
      r.rhs -= a[j] * m.offset;
      r.coeffs[m.pos] += a[j] * m.sign;
      if (m.neg != VarMap::kNone) r.coeffs[m.neg] -= a[j];
    }
    std_rows.push_back(std::move(r));
  }
  for (const auto& [col, width] : upper_rows) {
    StdRow r{std::vector<double>(structural, 0.0), RowSense::kLessEqual, width};
    r.coeffs[col] = 1.0;
    std_rows.push_back(std::move(r));
  }

  const std::size_t m = std_rows.size();
  std::size_t num_slack = 0;
  for (const auto& r : std_rows) {
    if (r.sense != RowSense::kEqual) ++num_slack;
  }

  // Rows whose slack enters with +1 after the rhs sign flip start basic on
  // the slack; the rest need an artificial.
  std::vector<std::size_t> slack_col(m, VarMap::kNone);
  std::vector<double> flip(m, 1.0);
  std::size_t num_art = 0;
  {
    std::size_t next_slack = structural;
    for (std::size_t i = 0; i < m; ++i) {
      const auto& r = std_rows[i];
      if (r.rhs < 0.0) flip[i] = -1.0;
      if (r.sense != RowSense::kEqual) slack_col[i] = next_slack++;
      const double slack_sign =
          r.sense == RowSense::kLessEqual ? 1.0
          : r.sense == RowSense::kGreaterEqual ? -1.0
                                               : 0.0;
      if (!(slack_sign * flip[i] > 0.0)) ++num_art;
    }
  }

  const std::size_t real_cols = structural + num_slack;
  Tableau t(m, real_cols + num_art);
  std::vector<double> row_norm(m, 0.0);
  {
    std::size_t next_art = real_cols;
    for (std::size_t i = 0; i < m; ++i) {
      const auto& r = std_rows[i];
      double* ti = t.row(i);
      for (std::size_t c = 0; c < structural; ++c) {
        ti[c] = flip[i] * r.coeffs[c];
        row_norm[i] += r.coeffs[c] * r.coeffs[c];
      }
      row_norm[i] = std::max(1.0, std::sqrt(row_norm[i]));
      t.rhs(i) = flip[i] * r.rhs;
      double slack_sign = 0.0;
      if (slack_col[i] != VarMap::kNone) {
        slack_sign = (r.sense == RowSense::kLessEqual ? 1.0 : -1.0) * flip[i];
        ti[slack_col[i]] = slack_sign;
      }
      if (slack_sign > 0.0) {
        t.basis[i] = slack_col[i];
      } else {
        ti[next_art] = 1.0;
        t.basis[i] = next_art++;
      }
    }
  }

  // Phase one: maximize -sum(artificials).
  if (num_art > 0) {
    std::vector<double> costs(t.cols, 0.0);
    for (std::size_t c = real_cols; c < t.cols; ++c) costs[c] = -1.0;
    t.load_objective(costs);
    run_simplex(t, 1.0, limits());

    for (std::size_t i = 0; i < m; ++i) {
      if (t.basis[i] >= real_cols && t.rhs(i) > kFeasibilityTol * row_norm[i]) {
        feasible = false;
        return;
      }
    }

    // Drive remaining (zero-level) artificials out of the basis; rows where
    // that is impossible are linearly dependent and get dropped.
    std::vector<bool> redundant(m, false);
    for (std::size_t i = 0; i < m; ++i) {
      if (t.basis[i] < real_cols) continue;
      std::size_t best_col = real_cols;
      double best = kPivotTol;
      const double* ti = t.row(i);
      for (std::size_t c = 0; c < real_cols; ++c) {
        if (std::abs(ti[c]) > best) {
          best = std::abs(ti[c]);
          best_col = c;
        }
      }
      if (best_col == real_cols) {
        redundant[i] = true;
      } else {
        t.rhs(i) = 0.0;
        t.pivot(i, best_col);
      }
    }

    std::size_t kept = 0;
    for (std::size_t i = 0; i < m; ++i) kept += redundant[i] ? 0 : 1;
    Tableau compact(kept, real_cols);
    std::size_t out = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (redundant[i]) continue;
      const double* src = t.row(i);
      double* dst = compact.row(out);
      std::copy(src, src + real_cols, dst);
      compact.rhs(out) = std::max(t.rhs(i), 0.0);
      compact.basis[out] = t.basis[i];
      ++out;
    }
    base = std::move(compact);
  } else {
    base = std::move(t);
  }
  feasible = true;
}

PreparedLp::PreparedLp(const LpModel& model) : impl_(std::make_unique<Impl>()) {
  impl_->build(model);
}
PreparedLp::~PreparedLp() = default;
PreparedLp::PreparedLp(PreparedLp&&) noexcept = default;
PreparedLp& PreparedLp::operator=(PreparedLp&&) noexcept = default;

std::size_t PreparedLp::num_vars() const noexcept { return impl_->num_vars; }
bool PreparedLp::feasible() const noexcept { return impl_->feasible; }

LpSolution PreparedLp::solve(std::span<const double> objective,
                             Sense sense) const {
  impl_->check_objective(objective, "solve_lp");
  if (!impl_->feasible) return {};
  Tableau t;
  const double sign = sense == Sense::kMaximize ? 1.0 : -1.0;
  const LpStatus status = impl_->maximize(t, objective, sign);
  if (status != LpStatus::kOptimal) return LpSolution{status, {}, {}};
  return impl_->finish(t, objective);
}

FaceSolution PreparedLp::solve_face(std::span<const double> primary,
                                    std::span<const double> secondary) const {
  impl_->check_objective(primary, "solve_second_stage (primary)");
  impl_->check_objective(secondary, "solve_second_stage (secondary)");
  FaceSolution out;
  if (!impl_->feasible) return out;

  Tableau t;
  const LpStatus first = impl_->maximize(t, primary, 1.0);
  if (first != LpStatus::kOptimal) {
    out.primary.status = first;
    out.secondary.status = first;
    return out;
  }
  out.primary = impl_->finish(t, primary);
  const double optimum = *out.primary.value;
  const double eps = kFaceTol * (1.0 + std::abs(optimum));

  // The optimal face is {y feasible : y_j = 0 for every column whose reduced
  // cost d_j is strictly negative}. Phase two for -secondary then runs from
  // the stage-one basis with those columns frozen, so every basis it visits
  // is a vertex of the face itself.
  const double* reduced = t.objective();
  const std::vector<double> primary_costs =
      impl_->column_costs(primary, 1.0, t.cols, nullptr);
  const double dtol = kReducedCostTol * std::max(1.0, max_abs(primary_costs));
  std::vector<char> on_face(t.cols, 0);
  for (std::size_t c = 0; c < t.cols; ++c) on_face[c] = reduced[c] >= -dtol;

  const std::vector<double> costs =
      impl_->column_costs(secondary, -1.0, t.cols, nullptr);
  t.load_objective(costs);
  const RunResult r = run_simplex(t, max_abs(costs), impl_->limits(), &on_face);
  if (r == RunResult::kUnbounded) {
    out.secondary.status = LpStatus::kUnbounded;
    return out;
  }
  LpSolution second = impl_->finish(t, secondary);
  double drift = 0.0;
  for (std::size_t j = 0; j < primary.size(); ++j) drift += primary[j] * second.point[j];
  if (std::abs(drift - optimum) > eps) {
    throw NumericalError("second stage left the optimal face (|primary.x - max| = " +
                             std::to_string(std::abs(drift - optimum)) + ")",
                         0);
  }
  out.secondary = std::move(second);
  return out;
}

LpSolution solve_lp(const LpModel& model, std::span<const double> objective,
                    Sense sense) {
  if (objective.size() != model.num_vars()) {
    throw ArgumentError("solve_lp: objective has " +
                        std::to_string(objective.size()) +
                        " entries, model has " +
                        std::to_string(model.num_vars()) + " variables");
  }
  return PreparedLp(model).solve(objective, sense);
}

LpSolution solve_second_stage(const LpModel& model,
                              std::span<const double> primary,
                              std::span<const double> secondary) {
  if (primary.size() != model.num_vars() ||
      secondary.size() != model.num_vars()) {
    throw ArgumentError("solve_second_stage: objective length mismatch");
  }
  return PreparedLp(model).solve_face(primary, secondary).secondary;
}

// ---------------------------------------------------------------------------
// Vertex enumeration

namespace {

struct Hyperplane {
  std::vector<double> a;
  double b;
};

// Solves the square system in place; false when numerically singular.
bool solve_square(std::vector<double>& m, std::vector<double>& rhs,
                  std::size_t n) {
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(m[r * n + col]) > std::abs(m[piv * n + col])) piv = r;
    }
    if (std::abs(m[piv * n + col]) < 1e-12) return false;
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(m[col * n + c], m[piv * n + c]);
      std::swap(rhs[col], rhs[piv]);
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = m[r * n + col] / m[col * n + col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) m[r * n + c] -= f * m[col * n + c];
      rhs[r] -= f * rhs[col];
    }
  }
  for (std::size_t r = 0; r < n; ++r) rhs[r] /= m[r * n + r];
  return true;
}

}  // namespace

std::vector<std::vector<double>> enumerate_vertices(const LpModel& model) {
  const std::size_t n = model.num_vars();
  std::vector<Hyperplane> planes;
  for (std::size_t i = 0; i < model.num_rows(); ++i) {
    const auto r = model.row(i);
    planes.push_back({std::vector<double>(r.begin(), r.end()), model.rhs(i)});
  }
  for (std::size_t j = 0; j < n; ++j) {
    for (double bound : {model.lower(j), model.upper(j)}) {
      if (!std::isfinite(bound)) continue;
      std::vector<double> e(n, 0.0);
      e[j] = 1.0;
      planes.push_back({std::move(e), bound});
    }
  }
  if (n > 6 || planes.size() > 24) {
    throw ArgumentError("enumerate_vertices: model too large (" +
                        std::to_string(n) + " vars, " +
                        std::to_string(planes.size()) +
                        " rows + finite bounds; limits 6 and 24)");
  }

  std::vector<std::vector<double>> vertices;
  const std::size_t k = planes.size();
  if (k < n) return vertices;

  // Walk every n-subset of the k hyperplanes.
  std::vector<std::size_t> pick(n);
  for (std::size_t i = 0; i < n; ++i) pick[i] = i;
  std::vector<double> m(n * n);
  std::vector<double> rhs(n);
  while (true) {
    for (std::size_t r = 0; r < n; ++r) {
      std::copy(planes[pick[r]].a.begin(), planes[pick[r]].a.end(), m.begin() + r * n);
      rhs[r] = planes[pick[r]].b;
    }
    if (solve_square(m, rhs, n) && model.contains(rhs, 1e-9)) {
      const bool seen = std::any_of(vertices.begin(), vertices.end(), [&](const auto& v) {
        for (std::size_t j = 0; j < n; ++j) {
          if (std::abs(v[j] - rhs[j]) > 1e-9) return false;
        }
        return true;
      });
      if (!seen) vertices.push_back(rhs);
    }

    std::size_t i = n;
    while (i > 0 && pick[i - 1] == k - n + (i - 1)) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < n; ++j) pick[j] = pick[j - 1] + 1;
  }
  std::sort(vertices.begin(), vertices.end());
  return vertices;
}

}  // namespace misspec
