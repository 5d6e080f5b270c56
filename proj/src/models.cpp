// Copyright 2026 The misspec Authors
// SPDX-License-Identifier: Apache-2.0

#include "misspec/models.hpp"

#include <cmath>
#include <numbers>

#include "misspec/errors.hpp"
#include "misspec/kernels.hpp"

namespace misspec {
namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

void check_alpha(double alpha, const char* what) {
  if (!(alpha > 0.0 && alpha < std::numbers::pi / 2)) {
    throw ArgumentError(std::string(what) + ": alpha must lie in (0, pi/2), got " +
                        std::to_string(alpha));
  }
}

void check_n(std::size_t n, std::size_t min, const char* what) {
  if (n < min) {
    throw ArgumentError(std::string(what) + ": dimension must be >= " + std::to_string(min));
  }
}

// v = w cos a + u sin a, z = w sin a - u cos a.
ObjectivePair rotate(std::vector<double> w, const std::vector<double>& u, double alpha,
                     ModelTag tag) {
  const double c = std::cos(alpha);
  const double s = std::sin(alpha);
  ObjectivePair p;
  p.v.resize(w.size());
  p.z.resize(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    p.v[j] = w[j] * c + u[j] * s;
    p.z[j] = w[j] * s - u[j] * c;
  }
  p.w = std::move(w);
  p.alpha = alpha;
  p.model_tag = tag;
  return p;
}

constexpr double kDegenerateNorm = 1e-300;

ObjectivePair pd2_given_alpha(std::size_t n, double alpha, RngStream& rng, ModelTag tag) {
  while (true) {
    std::vector<double> w = standard_gaussian_vector(n, rng);
    std::vector<double> u = standard_gaussian_vector(n, rng);
    const double w_norm = std::sqrt(kernels::norm2(w));
    if (w_norm < kDegenerateNorm) continue;
    kernels::scale(1.0 / w_norm, w);
    // u_hat = (I - w w^T) u with w already unit length.
    kernels::axpy(-kernels::dot(w, u), w, u);
    const double u_norm = std::sqrt(kernels::norm2(u));
    if (u_norm < kDegenerateNorm) continue;
    kernels::scale(1.0 / u_norm, u);
    return rotate(std::move(w), u, alpha, tag);
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// RngStream

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
    : master_seed_(master_seed), stream_index_(stream_index) {
  std::uint64_t mix = stream_index;
  std::uint64_t state = master_seed ^ splitmix64(mix);
  for (auto& word : s_) word = splitmix64(state);
  if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
}

RngStream::result_type RngStream::operator()() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RngStream::uniform() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double RngStream::gaussian() {
  if (spare_) {
    const double out = *spare_;
    spare_.reset();
    return out;
  }
  double x, y, s;
  do {
    x = 2.0 * uniform() - 1.0;
    y = 2.0 * uniform() - 1.0;
    s = x * x + y * y;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = y * f;
  return x * f;
}

const char* to_string(ModelTag tag) {
  switch (tag) {
    case ModelTag::kPD1:
      return "pd1";
    case ModelTag::kPD2:
      return "pd2";
    case ModelTag::kRandomAlpha:
      return "random-alpha";
    case ModelTag::kSwap:
      return "swap";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Samplers

std::vector<double> standard_gaussian_vector(std::size_t n, RngStream& rng) {
  check_n(n, 1, "standard_gaussian_vector");
  std::vector<double> out(n);
  for (double& x : out) x = rng.gaussian();
  return out;
}

ObjectivePair sample_pd1(std::size_t n, double alpha, RngStream& rng) {
  check_n(n, 2, "sample_pd1");
  check_alpha(alpha, "sample_pd1");
  std::vector<double> w = standard_gaussian_vector(n, rng);
  const std::vector<double> u = standard_gaussian_vector(n, rng);
  return rotate(std::move(w), u, alpha, ModelTag::kPD1);
}

ObjectivePair sample_pd2(std::size_t n, double alpha, RngStream& rng) {
  check_n(n, 2, "sample_pd2");
  check_alpha(alpha, "sample_pd2");
  return pd2_given_alpha(n, alpha, rng, ModelTag::kPD2);
}

AlphaDistribution AlphaDistribution::fixed(double alpha) {
  check_alpha(alpha, "AlphaDistribution::fixed");
  return AlphaDistribution([alpha](RngStream&) { return alpha; }, std::cos(alpha),
                           "fixed:" + std::to_string(alpha * 180.0 / std::numbers::pi));
}

AlphaDistribution AlphaDistribution::uniform(double lo, double hi) {
  check_alpha(lo, "AlphaDistribution::uniform");
  check_alpha(hi, "AlphaDistribution::uniform");
  if (lo > hi) throw ArgumentError("AlphaDistribution::uniform: lo > hi");
  // E[cos a] = (sin hi - sin lo) / (hi - lo)
  const double mean_cos = hi > lo ? (std::sin(hi) - std::sin(lo)) / (hi - lo) : std::cos(lo);
  const double deg = 180.0 / std::numbers::pi;
  return AlphaDistribution(
      [lo, hi](RngStream& rng) { return lo + (hi - lo) * rng.uniform(); }, mean_cos,
      "uniform:" + std::to_string(lo * deg) + ":" + std::to_string(hi * deg));
}

AlphaDistribution AlphaDistribution::custom(std::function<double(RngStream&)> sampler,
                                            std::optional<double> mean_cos,
                                            std::string label) {
  if (!sampler) throw ArgumentError("AlphaDistribution::custom: empty sampler");
  return AlphaDistribution(std::move(sampler), mean_cos, std::move(label));
}

double AlphaDistribution::sample(RngStream& rng) const {
  const double a = sampler_(rng);
  check_alpha(a, "AlphaDistribution::sample");
  return a;
}

ObjectivePair sample_random_alpha(std::size_t n, const AlphaDistribution& alpha,
                                  BaseModel base, RngStream& rng) {
  check_n(n, 2, "sample_random_alpha");
  const double a = alpha.sample(rng);
  ObjectivePair p = base == BaseModel::kPD1 ? sample_pd1(n, a, rng)
                                            : pd2_given_alpha(n, a, rng, ModelTag::kPD2);
  p.model_tag = ModelTag::kRandomAlpha;
  return p;
}

SymmetricDensity SymmetricDensity::gaussian(double sigma) {
  if (!(sigma > 0.0)) throw ArgumentError("SymmetricDensity::gaussian: sigma must be > 0");
  return {Kind::kGaussian, sigma};
}

SymmetricDensity SymmetricDensity::uniform(double half_width) {
  if (!(half_width > 0.0)) throw ArgumentError("SymmetricDensity::uniform: width must be > 0");
  return {Kind::kUniform, half_width};
}

SymmetricDensity SymmetricDensity::laplace(double scale) {
  if (!(scale > 0.0)) throw ArgumentError("SymmetricDensity::laplace: scale must be > 0");
  return {Kind::kLaplace, scale};
}

double SymmetricDensity::sample(RngStream& rng) const {
  switch (kind_) {
    case Kind::kGaussian:
      return scale_ * rng.gaussian();
    case Kind::kUniform:
      return scale_ * (2.0 * rng.uniform() - 1.0);
    case Kind::kLaplace: {
      // Random sign times an exponential magnitude.
      const double e = -std::log1p(-rng.uniform());
      return (rng() >> 63) ? scale_ * e : -scale_ * e;
    }
  }
  return 0.0;
}

ObjectivePair sample_swap(std::span<const SymmetricDensity> densities, double alpha,
                          RngStream& rng) {
  check_n(densities.size(), 1, "sample_swap");
  check_alpha(alpha, "sample_swap");
  const double keep = std::cos(alpha);
  const std::size_t n = densities.size();
  ObjectivePair p;
  p.w.resize(n);
  p.v.resize(n);
  p.z.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double w = densities[j].sample(rng);
    const double u = densities[j].sample(rng);
    const bool same = rng.uniform() < keep;
    p.w[j] = w;
    p.v[j] = same ? w : u;
    p.z[j] = same ? u : w;  // = w + u - v, without the roundoff
  }
  p.alpha = alpha;
  p.model_tag = ModelTag::kSwap;
  return p;
}

double angle_between(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ArgumentError("angle_between: dimension mismatch");
  const double na = std::sqrt(kernels::norm2(a));
  const double nb = std::sqrt(kernels::norm2(b));
  if (na == 0.0 || nb == 0.0) throw ArgumentError("angle_between: zero vector");
  // 2 atan2(|a/|a| - b/|b||, |a/|a| + b/|b||) equals the clamped arccos of
  // the normalized inner product but keeps full accuracy near 0 and pi.
  double diff = 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = a[i] / na;
    const double y = b[i] / nb;
    diff += (x - y) * (x - y);
    sum += (x + y) * (x + y);
  }
  return 2.0 * std::atan2(std::sqrt(diff), std::sqrt(sum));
}

}  // namespace misspec
