// Copyright 2026 The misspec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Loss of optimizing a nominal objective v when the true objective is w:
//
//   los(v, w)  = max(w) - min{w.x : x in C, v.x = max(v)}
//   slos(v, w) = los(v, w) / ran(w)
//
// together with the tight worst-case bound for rB^2 <= C <= B^2 and a
// seeded, thread-count independent Monte Carlo engine for E los / E ran.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "misspec/models.hpp"
#include "misspec/regions.hpp"

namespace misspec {

double loss(const Region& region, const ObjectivePair& pair);

/// Throws DegenerateRangeError when ran(w) <= 1e-14 (1 + |max(w)|).
double scaled_loss(const Region& region, const ObjectivePair& pair);

/// True when ran(w) is zero up to roundoff relative to max(w).
bool is_degenerate_range(double range, double max_w);

struct WorstCaseParams {
  double r;
  double rho;    // sqrt(1 - r^2)
  double alpha;  // radians

  /// Validates 0 < r < 1, 0 < alpha < pi/2 and sin a <= r <= cos a up to
  /// `slack`, so that the extreme admissible angles are accepted.
  static WorstCaseParams make(double r, double alpha, double slack = 1e-12);
};

/// 2 rho sin a / (r (1 + cos a) + rho sin a).
double worst_case_bound(const WorstCaseParams& params);

/// (1 - cos a) / 2.
double model_case_value(double alpha);

/// Which random model generates the (w, v, z) triples of an experiment.
class SamplerSpec {
 public:
  static SamplerSpec pd1(double alpha);
  static SamplerSpec pd2(double alpha);
  /// Empty densities means a standard Gaussian in every coordinate.
  static SamplerSpec swap(double alpha, std::vector<SymmetricDensity> densities = {});
  static SamplerSpec random_alpha(AlphaDistribution distribution, BaseModel base);

  ObjectivePair draw(std::size_t n, RngStream& rng) const;

  ModelTag tag() const noexcept { return tag_; }
  /// The fixed angle, or NaN for random_alpha.
  double alpha() const noexcept { return alpha_; }
  /// E[cos a] when known in closed form.
  std::optional<double> mean_cos() const;
  std::string label() const;

 private:
  SamplerSpec() = default;

  ModelTag tag_ = ModelTag::kPD1;
  double alpha_ = 0.0;
  std::vector<SymmetricDensity> densities_;
  std::optional<AlphaDistribution> distribution_;
  BaseModel base_ = BaseModel::kPD1;
};

/// Indices into ExperimentResult::means / covariance.
enum Moment : std::size_t {
  kLoss = 0,
  kRange = 1,
  kMaxW = 2,
  kMaxV = 3,
  kCosMaxW = 4,  // cos(a_i) max(w) per trial
  kNumMoments = 5,
};

struct ExperimentResult {
  std::string sampler;
  double alpha = 0.0;  // radians; NaN when drawn per trial
  std::size_t trials = 0;
  std::size_t skipped_trials = 0;

  double mean_loss = 0.0;
  double mean_range = 0.0;
  double mean_max_w = 0.0;
  double mean_max_v = 0.0;
  /// Empirical mean of cos(a_i) over all trials.
  double mean_cos = 0.0;
  /// Closed-form E[cos a] when the sampler provides one.
  std::optional<double> exact_mean_cos;

  double ratio_of_expectations = 0.0;
  double stderr_ratio_of_expectations = 0.0;
  double expectation_of_ratio = 0.0;
  double stderr_expectation_of_ratio = 0.0;
  /// Smallest and largest per-trial scaled loss over valid trials.
  double min_scaled_loss = 0.0;
  double max_scaled_loss = 0.0;

  /// Sample means and covariance of the per-trial moment vector.
  std::array<double, kNumMoments> means{};
  std::array<std::array<double, kNumMoments>, kNumMoments> covariance{};

  std::size_t valid_trials() const noexcept { return trials - skipped_trials; }
  /// (1 - E cos a) / 2, using the closed form when available.
  double theory() const;
};

struct ExperimentOptions {
  std::size_t trials = 10000;
  std::uint64_t seed = 0;
  /// 0 means std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// Trial i uses RngStream(seed, i); the result is bit-identical for every
/// thread count.
ExperimentResult run_experiment(const Region& region, const SamplerSpec& spec,
                                const ExperimentOptions& options);

struct IdentityCheck {
  std::string name;
  double difference;  // sample mean of the per-trial difference
  double stderr_;
  double z;
  bool pass;  // |z| <= 4
};

struct IdentityReport {
  std::array<IdentityCheck, 3> checks;
  bool low_sample;  // fewer than 100 trials
  bool all_pass() const noexcept;
};

/// E max v = E max w, E ran = 2 E max w and E los = (1 - cos a) E max w,
/// each as a z-score of the paired per-trial difference. `cos_override`
/// replaces the per-trial cos a in the third identity.
IdentityReport check_expectation_identities(const ExperimentResult& result,
                                            std::optional<double> cos_override = std::nullopt);

struct MeanZeroResult {
  double mean;
  double stderr_;
  double z;
};

enum class DiagnosticVector { kReverse, kTrue };

/// Sample mean of z.x_v (or w.x_v with kTrue) with x_v a maximizer of v.
MeanZeroResult mean_zero_diagnostic(const Region& region, const SamplerSpec& spec,
                                    const ExperimentOptions& options,
                                    DiagnosticVector which = DiagnosticVector::kReverse);

/// Fixed true objective w on a BinarySet region; each trial optimizes
/// v = (w / |w|) cos a + (g / sqrt n) sin a with g standard Gaussian and
/// a = atan(sigma).
ExperimentResult perturb_binary_experiment(const Region& region, const std::vector<double>& w,
                                           double sigma, const ExperimentOptions& options);

}  // namespace misspec
