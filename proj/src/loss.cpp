// Copyright 2026 The misspec Authors
// SPDX-License-Identifier: Apache-2.0

#include "misspec/loss.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "misspec/errors.hpp"
#include "misspec/kernels.hpp"

namespace misspec {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kDegenerateRangeRel = 1e-14;
constexpr double kIdentityZ = 4.0;
constexpr double kIdentityRoundoff = 1e-12;

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct TrialRecord {
  std::array<double, kNumMoments> m{};
  double scaled = 0.0;
  double cos_alpha = 0.0;
  bool valid = false;
};

unsigned resolve_threads(unsigned requested, std::size_t trials) {
  unsigned t = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  if (trials < t) t = static_cast<unsigned>(std::max<std::size_t>(trials, 1));
  return t;
}

// Evaluates fn(i) for i in [0, trials) into out[i]. Each worker owns one
// contiguous block; if any trial throws, the exception of the lowest failing
// index is rethrown so failures are as reproducible as results.
template <class Record, class Fn>
std::vector<Record> run_trials(std::size_t trials, unsigned threads, Fn fn) {
  std::vector<Record> out(trials);
  const unsigned workers = resolve_threads(threads, trials);
  std::vector<std::size_t> fail_index(workers, trials);
  std::vector<std::exception_ptr> fail(workers);

  auto work = [&](unsigned t) {
    const std::size_t begin = trials * t / workers;
    const std::size_t end = trials * (t + 1) / workers;
    for (std::size_t i = begin; i < end; ++i) {
      try {
        out[i] = fn(i);
      } catch (...) {
        fail_index[t] = i;
        fail[t] = std::current_exception();
        return;
      }
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  const auto first = std::min_element(fail_index.begin(), fail_index.end());
  if (*first < trials) std::rethrow_exception(fail[first - fail_index.begin()]);
  return out;
}

TrialRecord evaluate(const Region& region, const ObjectivePair& p, double cos_alpha) {
  TrialRecord rec;
  const double max_w = support(region, p.w).value;
  std::vector<double> neg(p.w);
  for (double& x : neg) x = -x;
  const double min_w = -support(region, neg).value;
  const double range = max_w - min_w;
  const FaceQuery face = optimal_face_query(region, p.v, p.w);

  rec.cos_alpha = cos_alpha;
  rec.m[kMaxW] = max_w;
  rec.m[kMaxV] = face.nominal.value;
  rec.m[kCosMaxW] = cos_alpha * max_w;
  if (is_degenerate_range(range, max_w)) {
    rec.valid = false;
    return rec;
  }
  rec.valid = true;
  rec.m[kLoss] = max_w - face.worst_true;
  rec.m[kRange] = range;
  rec.scaled = rec.m[kLoss] / range;
  return rec;
}

ExperimentResult aggregate(const std::vector<TrialRecord>& recs) {
  ExperimentResult r;
  const std::size_t n = recs.size();
  r.trials = n;

  std::array<CompensatedSum, kNumMoments> sums;
  CompensatedSum cos_sum, slos_sum;
  r.min_scaled_loss = std::numeric_limits<double>::infinity();
  r.max_scaled_loss = -std::numeric_limits<double>::infinity();
  for (const auto& rec : recs) {
    for (std::size_t k = 0; k < kNumMoments; ++k) sums[k].add(rec.m[k]);
    cos_sum.add(rec.cos_alpha);
    if (rec.valid) {
      slos_sum.add(rec.scaled);
      r.min_scaled_loss = std::min(r.min_scaled_loss, rec.scaled);
      r.max_scaled_loss = std::max(r.max_scaled_loss, rec.scaled);
    } else {
      ++r.skipped_trials;
    }
  }
  for (std::size_t k = 0; k < kNumMoments; ++k) r.means[k] = sums[k].value() / n;
  r.mean_cos = cos_sum.value() / n;

  std::array<std::array<CompensatedSum, kNumMoments>, kNumMoments> cross;
  for (const auto& rec : recs) {
    std::array<double, kNumMoments> d;
    for (std::size_t k = 0; k < kNumMoments; ++k) d[k] = rec.m[k] - r.means[k];
    for (std::size_t a = 0; a < kNumMoments; ++a) {
      for (std::size_t b = a; b < kNumMoments; ++b) cross[a][b].add(d[a] * d[b]);
    }
  }
  for (std::size_t a = 0; a < kNumMoments; ++a) {
    for (std::size_t b = a; b < kNumMoments; ++b) {
      const double c = n > 1 ? cross[a][b].value() / (n - 1) : kNaN;
      r.covariance[a][b] = c;
      r.covariance[b][a] = c;
    }
  }

  r.mean_loss = r.means[kLoss];
  r.mean_range = r.means[kRange];
  r.mean_max_w = r.means[kMaxW];
  r.mean_max_v = r.means[kMaxV];

  // Delta method for L/A: var ~ (s_LL - 2 R s_LA + R^2 s_AA) / (n A^2).
  const double ratio = r.mean_range != 0.0 ? r.mean_loss / r.mean_range : kNaN;
  r.ratio_of_expectations = ratio;
  const auto& s = r.covariance;
  const double var = s[kLoss][kLoss] - 2.0 * ratio * s[kLoss][kRange] + ratio * ratio * s[kRange][kRange];
  r.stderr_ratio_of_expectations =
      std::sqrt(std::max(var, 0.0) / static_cast<double>(n)) / std::abs(r.mean_range);

  const std::size_t valid = r.valid_trials();
  if (valid == 0) {
    r.expectation_of_ratio = kNaN;
    r.stderr_expectation_of_ratio = kNaN;
    r.min_scaled_loss = kNaN;
    r.max_scaled_loss = kNaN;
  } else {
    r.expectation_of_ratio = slos_sum.value() / valid;
    CompensatedSum dev;
    for (const auto& rec : recs) {
      if (!rec.valid) continue;
      const double d = rec.scaled - r.expectation_of_ratio;
      dev.add(d * d);
    }
    r.stderr_expectation_of_ratio =
        valid > 1 ? std::sqrt(dev.value() / (valid - 1) / valid) : kNaN;
  }
  return r;
}

void check_trials(const ExperimentOptions& options, const char* what) {
  if (options.trials < 1) throw ArgumentError(std::string(what) + ": trials must be >= 1");
}

std::size_t sampler_dimension(const Region& region, const SamplerSpec& spec, const char* what) {
  const std::size_t n = region.dimension();
  if (spec.tag() != ModelTag::kSwap && n < 2) {
    throw ArgumentError(std::string(what) + ": the rotation models need dimension >= 2");
  }
  return n;
}

double trial_cos(const SamplerSpec& spec, const ObjectivePair& p) {
  return std::cos(spec.tag() == ModelTag::kRandomAlpha ? p.alpha : spec.alpha());
}

std::string degrees(double radians) {
  std::ostringstream os;
  os << radians * 180.0 / std::numbers::pi;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------

bool is_degenerate_range(double range, double max_w) {
  return range <= kDegenerateRangeRel * (1.0 + std::abs(max_w));
}

double loss(const Region& region, const ObjectivePair& pair) {
  const double max_w = support(region, pair.w).value;
  return max_w - worst_over_optimal_face(region, pair.v, pair.w);
}

double scaled_loss(const Region& region, const ObjectivePair& pair) {
  const double max_w = support(region, pair.w).value;
  const double range = range_of(region, pair.w);
  if (is_degenerate_range(range, max_w)) {
    throw DegenerateRangeError("scaled_loss: ran(w) is zero up to roundoff");
  }
  return (max_w - worst_over_optimal_face(region, pair.v, pair.w)) / range;
}

WorstCaseParams WorstCaseParams::make(double r, double alpha, double slack) {
  if (!(r > 0.0 && r < 1.0)) throw ArgumentError("worst-case bound: r must lie in (0, 1)");
  if (!(alpha > 0.0 && alpha < std::numbers::pi / 2)) {
    throw ArgumentError("worst-case bound: alpha must lie in (0, pi/2)");
  }
  const double s = std::sin(alpha);
  const double c = std::cos(alpha);
  if (s > r + slack || r > c + slack) {
    std::ostringstream os;
    os << "worst-case bound: requires sin(alpha) <= r <= cos(alpha), got sin(alpha) = " << s
       << ", r = " << r << ", cos(alpha) = " << c;
    throw ArgumentError(os.str());
  }
  return {r, std::sqrt(1.0 - r * r), alpha};
}

double worst_case_bound(const WorstCaseParams& p) {
  const double s = std::sin(p.alpha);
  const double c = std::cos(p.alpha);
  return 2.0 * p.rho * s / (p.r * (1.0 + c) + p.rho * s);
}

double model_case_value(double alpha) {
  if (!(alpha > 0.0 && alpha < std::numbers::pi / 2)) {
    throw ArgumentError("model_case_value: alpha must lie in (0, pi/2)");
  }
  return (1.0 - std::cos(alpha)) / 2.0;
}

// ---------------------------------------------------------------------------
// SamplerSpec

SamplerSpec SamplerSpec::pd1(double alpha) {
  SamplerSpec s;
  s.tag_ = ModelTag::kPD1;
  s.alpha_ = alpha;
  return s;
}

SamplerSpec SamplerSpec::pd2(double alpha) {
  SamplerSpec s = pd1(alpha);
  s.tag_ = ModelTag::kPD2;
  return s;
}

SamplerSpec SamplerSpec::swap(double alpha, std::vector<SymmetricDensity> densities) {
  SamplerSpec s = pd1(alpha);
  s.tag_ = ModelTag::kSwap;
  s.densities_ = std::move(densities);
  return s;
}

SamplerSpec SamplerSpec::random_alpha(AlphaDistribution distribution, BaseModel base) {
  SamplerSpec s;
  s.tag_ = ModelTag::kRandomAlpha;
  s.alpha_ = kNaN;
  s.distribution_ = std::move(distribution);
  s.base_ = base;
  return s;
}

ObjectivePair SamplerSpec::draw(std::size_t n, RngStream& rng) const {
  switch (tag_) {
    case ModelTag::kPD1:
      return sample_pd1(n, alpha_, rng);
    case ModelTag::kPD2:
      return sample_pd2(n, alpha_, rng);
    case ModelTag::kSwap:
      if (densities_.empty()) {
        const std::vector<SymmetricDensity> g(n, SymmetricDensity::gaussian());
        return sample_swap(g, alpha_, rng);
      }
      if (densities_.size() != n) throw ArgumentError("swap sampler: density count != dimension");
      return sample_swap(densities_, alpha_, rng);
    case ModelTag::kRandomAlpha:
      return sample_random_alpha(n, *distribution_, base_, rng);
  }
  throw ArgumentError("unknown sampler");
}

std::optional<double> SamplerSpec::mean_cos() const {
  if (tag_ == ModelTag::kRandomAlpha) return distribution_->mean_cos();
  return std::cos(alpha_);
}

std::string SamplerSpec::label() const {
  switch (tag_) {
    case ModelTag::kRandomAlpha:
      return std::string("random-alpha(") + (base_ == BaseModel::kPD1 ? "pd1" : "pd2") + "," +
             distribution_->label() + ")";
    case ModelTag::kSwap:
      return "swap(" + degrees(alpha_) + "deg)";
    default:
      return std::string(to_string(tag_)) + "(" + degrees(alpha_) + "deg)";
  }
}

// ---------------------------------------------------------------------------
// Experiments

double ExperimentResult::theory() const {
  return (1.0 - exact_mean_cos.value_or(mean_cos)) / 2.0;
}

ExperimentResult run_experiment(const Region& region, const SamplerSpec& spec,
                                const ExperimentOptions& options) {
  check_trials(options, "run_experiment");
  const std::size_t n = sampler_dimension(region, spec, "run_experiment");
  const auto recs = run_trials<TrialRecord>(options.trials, options.threads, [&](std::size_t i) {
    RngStream rng(options.seed, i);
    const ObjectivePair p = spec.draw(n, rng);
    return evaluate(region, p, trial_cos(spec, p));
  });
  ExperimentResult r = aggregate(recs);
  r.sampler = spec.label();
  r.alpha = spec.alpha();
  r.exact_mean_cos = spec.mean_cos();
  return r;
}

bool IdentityReport::all_pass() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.pass; });
}

IdentityReport check_expectation_identities(const ExperimentResult& result,
                                            std::optional<double> cos_override) {
  using Weights = std::array<double, kNumMoments>;
  const double n = static_cast<double>(result.trials);
  const double floor = kIdentityRoundoff * (1.0 + std::abs(result.mean_max_w));

  auto make = [&](std::string name, const Weights& a) {
    double mean = 0.0, var = 0.0;
    for (std::size_t i = 0; i < kNumMoments; ++i) {
      mean += a[i] * result.means[i];
      for (std::size_t j = 0; j < kNumMoments; ++j) var += a[i] * a[j] * result.covariance[i][j];
    }
    const double se = std::sqrt(std::max(var, 0.0) / n);
    double z = se > 0.0 ? mean / se : (mean == 0.0 ? 0.0 : std::copysign(kInf, mean));
    // A difference at roundoff level passes even when the paired variance
    // is itself at roundoff level (e.g. the ball, where the identities hold
    // per trial).
    const bool pass = std::abs(z) <= kIdentityZ || std::abs(mean) <= floor;
    return IdentityCheck{std::move(name), mean, se, z, pass};
  };

  Weights max_v{}, range{}, loss{};
  max_v[kMaxV] = 1.0;
  max_v[kMaxW] = -1.0;
  range[kRange] = 1.0;
  range[kMaxW] = -2.0;
  loss[kLoss] = 1.0;
  if (cos_override) {
    loss[kMaxW] = -(1.0 - *cos_override);
  } else {
    loss[kMaxW] = -1.0;
    loss[kCosMaxW] = 1.0;
  }

  IdentityReport report{{make("E max v - E max w", max_v), make("E ran - 2 E max w", range),
                         make("E los - (1 - cos a) E max w", loss)},
                        result.trials < 100};
  return report;
}

MeanZeroResult mean_zero_diagnostic(const Region& region, const SamplerSpec& spec,
                                    const ExperimentOptions& options, DiagnosticVector which) {
  check_trials(options, "mean_zero_diagnostic");
  const std::size_t n = sampler_dimension(region, spec, "mean_zero_diagnostic");
  const auto values = run_trials<double>(options.trials, options.threads, [&](std::size_t i) {
    RngStream rng(options.seed, i);
    const ObjectivePair p = spec.draw(n, rng);
    const SupportResult s = support(region, p.v);
    return kernels::dot(which == DiagnosticVector::kReverse ? p.z : p.w, s.maximizer);
  });
  CompensatedSum sum;
  for (double x : values) sum.add(x);
  const double mean = sum.value() / values.size();
  CompensatedSum dev;
  for (double x : values) dev.add((x - mean) * (x - mean));
  const double se = values.size() > 1
                        ? std::sqrt(dev.value() / (values.size() - 1) / values.size())
                        : kNaN;
  const double z = se > 0.0 ? mean / se : (mean == 0.0 ? 0.0 : kNaN);
  return {mean, se, z};
}

ExperimentResult perturb_binary_experiment(const Region& region, const std::vector<double>& w,
                                           double sigma, const ExperimentOptions& options) {
  check_trials(options, "perturb_binary_experiment");
  if (!std::holds_alternative<BinarySetRegion>(region.backend())) {
    throw ArgumentError("perturb_binary_experiment: region must be a binary set");
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ArgumentError("perturb_binary_experiment: sigma must be positive");
  }
  const std::size_t n = region.dimension();
  if (w.size() != n) throw ArgumentError("perturb_binary_experiment: w has the wrong dimension");
  const double w_norm = std::sqrt(kernels::norm2(w));
  if (w_norm == 0.0) throw ArgumentError("perturb_binary_experiment: w must be nonzero");

  const double alpha = std::atan(sigma);
  const double c = std::cos(alpha);
  const double s = std::sin(alpha);
  const double root_n = std::sqrt(static_cast<double>(n));

  const auto recs = run_trials<TrialRecord>(options.trials, options.threads, [&](std::size_t i) {
    RngStream rng(options.seed, i);
    const std::vector<double> g = standard_gaussian_vector(n, rng);
    ObjectivePair p;
    p.w = w;
    p.v.resize(n);
    p.z.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      p.v[j] = w[j] / w_norm * c + g[j] / root_n * s;
      p.z[j] = w[j] / w_norm * s - g[j] / root_n * c;
    }
    p.alpha = alpha;
    return evaluate(region, p, c);
  });
  ExperimentResult r = aggregate(recs);
  std::ostringstream label;
  label << "perturb-binary(sigma=" << sigma << ")";
  r.sampler = label.str();
  r.alpha = alpha;
  r.exact_mean_cos = c;
  return r;
}

}  // namespace misspec
