// Copyright 2026 The misspec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Compact feasible regions C and the three queries the loss functionals are
// built from:
//
//   support(v)                    max{v.x : x in C} and one maximizer
//   range_of(w)                   max(w) - min(w)
//   worst_over_optimal_face(v,w)  min{w.x : x in C, v.x = max(v)}
//
// Regions are immutable values and every query is safe to call from many
// threads at once.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "misspec/lp.hpp"

namespace misspec {

/// Membership tolerance for optimal faces: x is on the v-face when
/// v.x >= max(v) - kFaceRelTol (1 + |max(v)|).
inline constexpr double kFaceRelTol = 1e-7;

inline double face_tolerance(double max_value) {
  return kFaceRelTol * (1.0 + (max_value < 0 ? -max_value : max_value));
}

struct BallRegion {
  std::vector<double> center;
  double radius;
};

/// Finite point cloud, stored row-major.
struct PointSetRegion {
  std::size_t dim;
  std::size_t count;
  std::vector<double> coords;

  std::span<const double> point(std::size_t i) const {
    return {coords.data() + i * dim, dim};
  }
};

struct PolytopeRegion {
  std::shared_ptr<const LpModel> model;
  std::shared_ptr<const PreparedLp> lp;
};

/// conv(rB^2 U {(-rho, r), (rho, r)}), rho = sqrt(1 - r^2): the instance on
/// which the worst-case scaled-loss bound is attained.
struct HullSegmentBallRegion {
  double r;
  double rho;
};

/// a.x <= capacity over {0,1}^n, with a >= 0.
struct Knapsack {
  std::vector<double> weights;
  double capacity;
};

struct BinarySetRegion {
  std::size_t n;
  std::optional<Knapsack> constraint;
};

class Region {
 public:
  using Backend = std::variant<BallRegion, PointSetRegion, PolytopeRegion,
                               HullSegmentBallRegion, BinarySetRegion>;

  static Region ball(std::vector<double> center, double radius);
  static Region point_set(const std::vector<std::vector<double>>& points);
  /// Runs LP phase one once; an infeasible model is accepted here and
  /// reported by the first query.
  static Region polytope(LpModel model);
  static Region hull_segment_ball(double r);
  static Region binary_set(std::size_t n,
                           std::optional<Knapsack> constraint = std::nullopt);

  std::size_t dimension() const noexcept { return dim_; }
  const Backend& backend() const noexcept { return backend_; }

  /// Short human-readable description, e.g. "ball(dim=3, radius=1)".
  std::string describe() const;

 private:
  Region(Backend backend, std::size_t dim)
      : backend_(std::move(backend)), dim_(dim) {}

  Backend backend_;
  std::size_t dim_;
};

struct SupportResult {
  double value;
  std::vector<double> maximizer;
};

/// Throws ArgumentError on a dimension mismatch (or v = 0 on the hull
/// instance) and UnboundedRegionError if a Polytope is unbounded along v.
SupportResult support(const Region& region, std::span<const double> v);

double range_of(const Region& region, std::span<const double> w);

/// Requires v != 0.
double worst_over_optimal_face(const Region& region, std::span<const double> v,
                               std::span<const double> w);

/// support(v) and worst_over_optimal_face(v, w) from one pass; the Polytope
/// backend shares the stage-one simplex solve between them.
struct FaceQuery {
  SupportResult nominal;
  double worst_true;
};
FaceQuery optimal_face_query(const Region& region, std::span<const double> v,
                             std::span<const double> w);

/// The tight instance for the worst-case bound; 0 < r < 1.
Region make_worst_case_instance(double r);

/// [0, 1]^2 as a Polytope.
Region make_unit_square();

/// The box [-1, 1]^dim cut by `cuts` halfspaces u.x <= b with u uniform on
/// the sphere and b uniform on [0.5, 0.9]; bounded, and contains 0.5 B^dim.
Region make_random_polytope(std::size_t dim, std::size_t cuts, std::uint64_t seed);

/// Region over precomputed criterion vectors y = (f_1(x), ..., f_k(x)).
Region image_point_set(const std::vector<std::vector<double>>& points);

}  // namespace misspec
