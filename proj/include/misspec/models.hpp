// Copyright 2026 The misspec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Random (true, nominal) objective pairs.
//
//   PD1   w, u ~ N(0, I),                v = w cos a + u sin a
//   PD2   w uniform on the sphere, u uniform on the unit sphere orthogonal
//         to w,                          v = w cos a + u sin a
//   RandomAlpha  a drawn first, then PD1 or PD2 given a
//   Swap  v_j = w_j with probability cos a, else an independent draw u_j
//
// Every pair also carries the reverse perturbation z for which (v, z) is
// distributed like (w, u): z = w sin a - u cos a for PD1/PD2 and
// z = w + u - v for Swap.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace misspec {

/// Deterministic stream of random bits identified by (master_seed,
/// stream_index); trial i of an experiment uses stream i, so trials can run
/// in any order on any thread. xoshiro256** seeded through SplitMix64.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal via the Marsaglia polar method.
  double gaussian();

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t stream_index() const noexcept { return stream_index_; }

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_index_;
  std::uint64_t s_[4];
  std::optional<double> spare_;
};

enum class ModelTag { kPD1, kPD2, kRandomAlpha, kSwap };
const char* to_string(ModelTag tag);

struct ObjectivePair {
  std::vector<double> w;  // true objective
  std::vector<double> v;  // nominal objective
  std::vector<double> z;  // reverse perturbation
  double alpha = 0.0;     // radians
  ModelTag model_tag = ModelTag::kPD1;

  std::size_t dimension() const noexcept { return w.size(); }
};

std::vector<double> standard_gaussian_vector(std::size_t n, RngStream& rng);

/// n >= 2, 0 < alpha < pi/2.
ObjectivePair sample_pd1(std::size_t n, double alpha, RngStream& rng);
ObjectivePair sample_pd2(std::size_t n, double alpha, RngStream& rng);

/// A distribution on (0, pi/2) for the random-angle extension.
class AlphaDistribution {
 public:
  /// Point mass; draws nothing from the stream.
  static AlphaDistribution fixed(double alpha);
  /// Uniform on [lo, hi], 0 < lo <= hi < pi/2.
  static AlphaDistribution uniform(double lo, double hi);
  /// Arbitrary sampler. `mean_cos` is E[cos a] when known in closed form.
  static AlphaDistribution custom(std::function<double(RngStream&)> sampler,
                                  std::optional<double> mean_cos,
                                  std::string label);

  /// Throws ArgumentError if the draw falls outside (0, pi/2).
  double sample(RngStream& rng) const;
  std::optional<double> mean_cos() const { return mean_cos_; }
  const std::string& label() const { return label_; }

 private:
  AlphaDistribution(std::function<double(RngStream&)> sampler,
                    std::optional<double> mean_cos, std::string label)
      : sampler_(std::move(sampler)), mean_cos_(mean_cos), label_(std::move(label)) {}

  std::function<double(RngStream&)> sampler_;
  std::optional<double> mean_cos_;
  std::string label_;
};

enum class BaseModel { kPD1, kPD2 };

ObjectivePair sample_random_alpha(std::size_t n, const AlphaDistribution& alpha,
                                  BaseModel base, RngStream& rng);

/// A scalar density symmetric about zero, for the component-swap model.
class SymmetricDensity {
 public:
  enum class Kind { kGaussian, kUniform, kLaplace };

  static SymmetricDensity gaussian(double sigma = 1.0);
  static SymmetricDensity uniform(double half_width);
  static SymmetricDensity laplace(double scale);

  double sample(RngStream& rng) const;
  Kind kind() const noexcept { return kind_; }
  double scale() const noexcept { return scale_; }

 private:
  SymmetricDensity(Kind kind, double scale) : kind_(kind), scale_(scale) {}
  Kind kind_;
  double scale_;
};

/// One density per coordinate; n = densities.size() >= 1.
ObjectivePair sample_swap(std::span<const SymmetricDensity> densities,
                          double alpha, RngStream& rng);

/// arccos of the normalized inner product, clamped to [-1, 1].
double angle_between(std::span<const double> a, std::span<const double> b);

}  // namespace misspec
