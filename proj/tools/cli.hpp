// Copyright 2026 The misspec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Command implementations behind the misspec executable. Each command turns
// a RunConfig into the exact text that is written to --out, so the text can
// be compared byte for byte.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "misspec/loss.hpp"
#include "misspec/regions.hpp"

namespace misspec::cli {

inline constexpr const char* kCsvHeader =
    "alpha_deg,trials,ratio_of_expectations,stderr_roe,expectation_of_ratio,stderr_eor,theory,"
    "mean_max_w,mean_max_v,mean_range,skipped";

enum class Command { kBound, kExperiment, kNetlib, kSwap, kPerturbBinary, kIdentities };

/// ball [DIM] | square | points FILE | mps FILE | worst-case R | binary N |
/// random-polytope DIM
struct RegionSpec {
  std::string kind = "square";
  std::string arg;
  std::uint64_t seed = 1;  // random-polytope only
};

/// pd1 | pd2 | swap | random-alpha SPEC, where SPEC is uniform:HALF_WIDTH in
/// degrees around each grid angle.
struct ModelSpec {
  std::string kind = "pd1";
  std::string arg;
  BaseModel base = BaseModel::kPD1;
  std::string density = "gaussian";  // swap: gaussian | uniform | laplace | mixed
};

struct RunConfig {
  Command command = Command::kExperiment;
  RegionSpec region;
  ModelSpec model;
  std::vector<double> alpha_grid_deg = {10, 20, 30, 40, 50, 60, 70, 80};
  std::size_t trials = 10000;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string out = "-";

  // bound
  double r = 0.8;
  double bound_alpha_deg = 36.87;
  double hypothesis_slack = 1e-4;  // angles are typed to about 0.01 degree

  // perturb-binary
  std::size_t binary_n = 15;
  std::vector<double> sigma_grid = {0.1, 0.2, 0.5, 1.0, 2.0};
  std::vector<double> weights;  // empty: Gaussian draws from the seed
  std::optional<double> knapsack_fraction;
};

/// "10,20,30" or "START:STOP:STEP" (inclusive).
std::vector<double> parse_grid(const std::string& text);

/// MISSPEC_SEED if set, else 1.
std::uint64_t default_seed();

Region build_region(const RegionSpec& spec);
SamplerSpec build_sampler(const ModelSpec& spec, double alpha_deg, std::size_t dim);

/// Output text of one command.
std::string run(const RunConfig& config);

/// Writes `text` to a temporary file next to `path` and renames it into
/// place; "-" writes to stdout.
void write_output(const std::string& path, const std::string& text);

}  // namespace misspec::cli
