// Copyright 2026 The misspec Authors
// SPDX-License-Identifier: Apache-2.0

#include "misspec/regions.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

#include "misspec/errors.hpp"
#include "misspec/kernels.hpp"
#include "misspec/models.hpp"

namespace misspec {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_dim(const Region& region, std::span<const double> v,
               const char* what) {
  if (v.size() != region.dimension()) {
    throw ArgumentError(std::string(what) + ": vector has dimension " +
                        std::to_string(v.size()) + ", region has dimension " +
                        std::to_string(region.dimension()));
  }
  for (double x : v) {
    if (!std::isfinite(x)) throw ArgumentError(std::string(what) + ": non-finite direction");
  }
}

bool is_zero(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

double dot(std::span<const double> a, std::span<const double> b) {
  return kernels::dot(a, b);
}

// ----- Ball

SupportResult ball_support(const BallRegion& b, std::span<const double> v) {
  const double norm = std::sqrt(kernels::norm2(v));
  SupportResult out{dot(v, b.center) + b.radius * norm, b.center};
  if (norm > 0.0) {
    for (std::size_t i = 0; i < v.size(); ++i) out.maximizer[i] += b.radius * v[i] / norm;
  }
  return out;
}

// ----- Point set

std::vector<double> all_dots(const PointSetRegion& p, std::span<const double> v) {
  std::vector<double> out(p.count);
  kernels::active().gemv(p.coords.data(), p.count, p.dim, v.data(), out.data());
  return out;
}

SupportResult point_support(const PointSetRegion& p, std::span<const double> v) {
  const auto values = all_dots(p, v);
  const auto best = static_cast<std::size_t>(
      std::max_element(values.begin(), values.end()) - values.begin());
  const auto x = p.point(best);
  return {values[best], std::vector<double>(x.begin(), x.end())};
}

FaceQuery point_face(const PointSetRegion& p, std::span<const double> v,
                     std::span<const double> w) {
  FaceQuery q{point_support(p, v), 0.0};
  const double cut = q.nominal.value - face_tolerance(q.nominal.value);
  const auto v_values = all_dots(p, v);
  const auto w_values = all_dots(p, w);
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.count; ++i) {
    if (v_values[i] >= cut) worst = std::min(worst, w_values[i]);
  }
  q.worst_true = worst;
  return q;
}

// ----- Polytope

[[noreturn]] void throw_polytope_failure(LpStatus status) {
  if (status == LpStatus::kInfeasible) {
    throw UnboundedRegionError("polytope region is empty (LP infeasible)");
  }
  throw UnboundedRegionError(
      "polytope region is unbounded in the query direction; the feasible "
      "region must be compact");
}

SupportResult polytope_support(const PolytopeRegion& p, std::span<const double> v) {
  LpSolution s = p.lp->solve(v, Sense::kMaximize);
  if (!s.optimal()) throw_polytope_failure(s.status);
  return {*s.value, std::move(s.point)};
}

FaceQuery polytope_face(const PolytopeRegion& p, std::span<const double> v,
                        std::span<const double> w) {
  FaceSolution f = p.lp->solve_face(v, w);
  if (!f.primary.optimal()) throw_polytope_failure(f.primary.status);
  if (!f.secondary.optimal()) throw_polytope_failure(f.secondary.status);
  return {{*f.primary.value, std::move(f.primary.point)}, *f.secondary.value};
}

// ----- Hull of the segment and the inner ball

std::array<std::array<double, 2>, 3> hull_candidates(const HullSegmentBallRegion& h,
                                                    std::span<const double> v) {
  const double norm = std::hypot(v[0], v[1]);
  if (norm == 0.0) {
    throw ArgumentError("hull-segment-ball support: direction must be nonzero");
  }
  return {{{h.r * v[0] / norm, h.r * v[1] / norm}, {-h.rho, h.r}, {h.rho, h.r}}};
}

SupportResult hull_support(const HullSegmentBallRegion& h, std::span<const double> v) {
  const auto cand = hull_candidates(h, v);
  std::size_t best = 0;
  double best_value = kNegInf;
  for (std::size_t i = 0; i < cand.size(); ++i) {
    const double value = v[0] * cand[i][0] + v[1] * cand[i][1];
    if (value > best_value) {
      best_value = value;
      best = i;
    }
  }
  return {best_value, {cand[best][0], cand[best][1]}};
}

// The v-face is the convex hull of whichever candidates attain the max, so
// its w-minimum is attained at one of them.
FaceQuery hull_face(const HullSegmentBallRegion& h, std::span<const double> v,
                    std::span<const double> w) {
  FaceQuery q{hull_support(h, v), 0.0};
  const double cut = q.nominal.value - face_tolerance(q.nominal.value);
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& c : hull_candidates(h, v)) {
    if (v[0] * c[0] + v[1] * c[1] >= cut) worst = std::min(worst, w[0] * c[0] + w[1] * c[1]);
  }
  q.worst_true = worst;
  return q;
}

// ----- Binary set

// sums[mask] = sum of values[j] over the set bits of mask, each entry built
// from one smaller subset plus a single term.
std::vector<double> subset_sums(std::span<const double> values) {
  std::vector<double> sums(std::size_t{1} << values.size(), 0.0);
  for (std::size_t mask = 1; mask < sums.size(); ++mask) {
    const auto low = static_cast<std::size_t>(std::countr_zero(mask));
    sums[mask] = sums[mask & (mask - 1)] + values[low];
  }
  return sums;
}

std::vector<double> mask_to_point(std::size_t n, std::uint64_t mask) {
  std::vector<double> x(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) x[j] = (mask >> j) & 1U ? 1.0 : 0.0;
  return x;
}

// Meet-in-the-middle enumeration of {0,1}^n under the knapsack row.
class BinaryEnumerator {
 public:
  explicit BinaryEnumerator(const BinarySetRegion& b) : lo_bits_(b.n / 2) {
    const std::span<const double> a = b.constraint->weights;
    a_lo_ = subset_sums(a.first(lo_bits_));
    a_hi_ = subset_sums(a.subspan(lo_bits_));
    limit_ = b.constraint->capacity + 1e-9 * (1.0 + std::abs(b.constraint->capacity));
  }

  // Calls fn(mask, value) for every feasible point, in mask order.
  template <class Fn>
  void for_each(std::span<const double> c, Fn&& fn) const {
    const auto c_lo = subset_sums(c.first(lo_bits_));
    const auto c_hi = subset_sums(c.subspan(lo_bits_));
    for (std::size_t hi = 0; hi < a_hi_.size(); ++hi) {
      for (std::size_t lo = 0; lo < a_lo_.size(); ++lo) {
        if (a_hi_[hi] + a_lo_[lo] > limit_) continue;
        fn((static_cast<std::uint64_t>(hi) << lo_bits_) | lo, c_hi[hi] + c_lo[lo]);
      }
    }
  }

 private:
  std::size_t lo_bits_;
  std::vector<double> a_lo_;
  std::vector<double> a_hi_;
  double limit_;
};

SupportResult binary_support(const BinarySetRegion& b, std::span<const double> v) {
  if (!b.constraint) {
    // Sign rule; ties (v_j = 0) go to 0.
    SupportResult out{0.0, std::vector<double>(b.n, 0.0)};
    for (std::size_t j = 0; j < b.n; ++j) {
      if (v[j] > 0.0) {
        out.value += v[j];
        out.maximizer[j] = 1.0;
      }
    }
    return out;
  }
  std::uint64_t best_mask = 0;
  double best = kNegInf;
  BinaryEnumerator(b).for_each(v, [&](std::uint64_t mask, double value) {
    if (value > best) {
      best = value;
      best_mask = mask;
    }
  });
  // x = 0 is always feasible since a >= 0 and capacity >= 0.
  return {best, mask_to_point(b.n, best_mask)};
}

FaceQuery binary_face(const BinarySetRegion& b, std::span<const double> v,
                      std::span<const double> w) {
  FaceQuery q{binary_support(b, v), 0.0};
  const double eps = face_tolerance(q.nominal.value);
  if (b.constraint) {
    const double cut = q.nominal.value - eps;
    const BinaryEnumerator e(b);
    // Pass one collects the face; pass two evaluates w on it.
    std::vector<std::uint64_t> face;
    e.for_each(v, [&](std::uint64_t mask, double value) {
      if (value >= cut) face.push_back(mask);
    });
    double worst = std::numeric_limits<double>::infinity();
    for (std::uint64_t mask : face) {
      double value = 0.0;
      for (std::size_t j = 0; j < b.n; ++j) {
        if ((mask >> j) & 1U) value += w[j];
      }
      worst = std::min(worst, value);
    }
    q.worst_true = worst;
    return q;
  }

  // Unconstrained: leaving the sign-rule point by flipping x_j costs |v_j|
  // in nominal value and changes w.x by w_j (0 -> 1) or -w_j (1 -> 0). The
  // face allows total cost <= eps; pick the cheapest set of helpful flips.
  const auto& x = q.nominal.maximizer;
  double base = 0.0;
  for (std::size_t j = 0; j < b.n; ++j) base += w[j] * x[j];
  std::vector<std::pair<double, double>> optional;  // (cost, gain < 0)
  for (std::size_t j = 0; j < b.n; ++j) {
    const double gain = x[j] == 1.0 ? -w[j] : w[j];
    if (gain >= 0.0) continue;
    const double cost = std::abs(v[j]);
    if (cost == 0.0) {
      base += gain;
    } else if (cost <= eps) {
      optional.emplace_back(cost, gain);
    }
  }
  double best = 0.0;
  const std::size_t k = optional.size();
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << k); ++mask) {
    double cost = 0.0;
    double gain = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      if ((mask >> i) & 1U) {
        cost += optional[i].first;
        gain += optional[i].second;
      }
    }
    if (cost <= eps) best = std::min(best, gain);
  }
  q.worst_true = base + best;
  return q;
}

}  // namespace

// ---------------------------------------------------------------------------
// Construction

Region Region::ball(std::vector<double> center, double radius) {
  if (center.empty()) throw ArgumentError("ball: center must have dimension >= 1");
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw ArgumentError("ball: radius must be positive and finite");
  }
  const std::size_t dim = center.size();
  return Region(BallRegion{std::move(center), radius}, dim);
}

Region Region::point_set(const std::vector<std::vector<double>>& points) {
  if (points.empty()) throw ArgumentError("point set: at least one point required");
  const std::size_t dim = points.front().size();
  if (dim == 0) throw ArgumentError("point set: points must have dimension >= 1");
  PointSetRegion p{dim, points.size(), {}};
  p.coords.reserve(dim * points.size());
  for (const auto& pt : points) {
    if (pt.size() != dim) {
      throw ArgumentError("point set: ragged input (dimension " +
                          std::to_string(pt.size()) + " vs " +
                          std::to_string(dim) + ")");
    }
    for (double x : pt) {
      if (!std::isfinite(x)) throw ArgumentError("point set: non-finite coordinate");
    }
    p.coords.insert(p.coords.end(), pt.begin(), pt.end());
  }
  return Region(std::move(p), dim);
}

Region Region::polytope(LpModel model) {
  const std::size_t dim = model.num_vars();
  auto m = std::make_shared<const LpModel>(std::move(model));
  auto lp = std::make_shared<const PreparedLp>(*m);
  return Region(PolytopeRegion{std::move(m), std::move(lp)}, dim);
}

Region Region::hull_segment_ball(double r) {
  if (!(r > 0.0 && r < 1.0)) {
    throw ArgumentError("hull-segment-ball: r must lie in the open interval (0, 1)");
  }
  return Region(HullSegmentBallRegion{r, std::sqrt(1.0 - r * r)}, 2);
}

Region Region::binary_set(std::size_t n, std::optional<Knapsack> constraint) {
  if (n == 0 || n > 25) throw ArgumentError("binary set: n must be in [1, 25]");
  if (constraint) {
    if (constraint->weights.size() != n) {
      throw ArgumentError("binary set: knapsack weights must have n entries");
    }
    for (double a : constraint->weights) {
      if (!(a >= 0.0) || !std::isfinite(a)) {
        throw ArgumentError("binary set: knapsack weights must be nonnegative");
      }
    }
    if (!(constraint->capacity >= 0.0)) {
      throw ArgumentError("binary set: knapsack capacity must be nonnegative");
    }
  }
  return Region(BinarySetRegion{n, std::move(constraint)}, n);
}

std::string Region::describe() const {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const BallRegion& b) {
                   os << "ball(dim=" << dim_ << ", radius=" << b.radius << ")";
                 },
                 [&](const PointSetRegion& p) {
                   os << "points(dim=" << dim_ << ", count=" << p.count << ")";
                 },
                 [&](const PolytopeRegion& p) {
                   os << "polytope(vars=" << dim_ << ", rows=" << p.model->num_rows() << ")";
                 },
                 [&](const HullSegmentBallRegion& h) {
                   os << "worst-case(r=" << h.r << ")";
                 },
                 [&](const BinarySetRegion& b) {
                   os << "binary(n=" << b.n << (b.constraint ? ", knapsack" : "") << ")";
                 },
             },
             backend_);
  return os.str();
}

// ---------------------------------------------------------------------------
// Queries

SupportResult support(const Region& region, std::span<const double> v) {
  check_dim(region, v, "support");
  return std::visit(
      Overloaded{
          [&](const BallRegion& b) { return ball_support(b, v); },
          [&](const PointSetRegion& p) { return point_support(p, v); },
          [&](const PolytopeRegion& p) { return polytope_support(p, v); },
          [&](const HullSegmentBallRegion& h) { return hull_support(h, v); },
          [&](const BinarySetRegion& b) { return binary_support(b, v); },
      },
      region.backend());
}

double range_of(const Region& region, std::span<const double> w) {
  check_dim(region, w, "range_of");
  std::vector<double> neg(w.begin(), w.end());
  for (double& x : neg) x = -x;
  return support(region, w).value + support(region, neg).value;
}

FaceQuery optimal_face_query(const Region& region, std::span<const double> v,
                             std::span<const double> w) {
  check_dim(region, v, "worst_over_optimal_face");
  check_dim(region, w, "worst_over_optimal_face");
  if (is_zero(v)) {
    throw ArgumentError("worst_over_optimal_face: nominal direction must be nonzero");
  }
  return std::visit(
      Overloaded{
          [&](const BallRegion& b) {
            // Strictly convex: the maximizer is unique.
            FaceQuery q{ball_support(b, v), 0.0};
            q.worst_true = dot(w, q.nominal.maximizer);
            return q;
          },
          [&](const PointSetRegion& p) { return point_face(p, v, w); },
          [&](const PolytopeRegion& p) { return polytope_face(p, v, w); },
          [&](const HullSegmentBallRegion& h) { return hull_face(h, v, w); },
          [&](const BinarySetRegion& b) { return binary_face(b, v, w); },
      },
      region.backend());
}

double worst_over_optimal_face(const Region& region, std::span<const double> v,
                               std::span<const double> w) {
  return optimal_face_query(region, v, w).worst_true;
}

Region make_worst_case_instance(double r) { return Region::hull_segment_ball(r); }

Region make_unit_square() {
  return Region::polytope(LpBuilder(2).set_all_bounds(0.0, 1.0).build());
}

Region make_random_polytope(std::size_t dim, std::size_t cuts, std::uint64_t seed) {
  if (dim < 1) throw ArgumentError("make_random_polytope: dim must be >= 1");
  LpBuilder builder(dim);
  builder.set_all_bounds(-1.0, 1.0);
  RngStream rng(seed, 0);
  for (std::size_t k = 0; k < cuts; ++k) {
    std::vector<double> u = standard_gaussian_vector(dim, rng);
    const double norm = std::sqrt(kernels::norm2(u));
    if (norm == 0.0) continue;
    for (double& x : u) x /= norm;
    builder.add_row(u, RowSense::kLessEqual, 0.5 + 0.4 * rng.uniform());
  }
  return Region::polytope(builder.build());
}

Region image_point_set(const std::vector<std::vector<double>>& points) {
  return Region::point_set(points);
}

}  // namespace misspec
