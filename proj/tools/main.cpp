// Copyright 2026 The misspec Authors
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>

#include <exception>
#include <iostream>

#include "cli.hpp"

namespace {

using misspec::cli::Command;
using misspec::cli::RunConfig;

struct Raw {
  std::vector<std::string> region = {"square"};
  std::vector<std::string> model = {"pd1"};
  std::string base = "pd1";
  std::string alpha_grid;
  std::string sigma_grid;
  std::string weights;
};

void add_common(CLI::App* app, RunConfig& c, Raw& raw, bool with_model) {
  app->add_option("--region", raw.region,
                  "ball [DIM] | square | points FILE | mps FILE | worst-case R | binary N | "
                  "random-polytope DIM")
      ->expected(1, 2);
  app->add_option("--region-seed", c.region.seed, "Seed of the random-polytope region");
  if (with_model) {
    app->add_option("--model", raw.model, "pd1 | pd2 | swap | random-alpha uniform:HALF_WIDTH")
        ->expected(1, 2);
    app->add_option("--base", raw.base, "Base model of random-alpha (pd1 | pd2)")
        ->check(CLI::IsMember({"pd1", "pd2"}));
  }
  app->add_option("--alpha-grid", raw.alpha_grid, "Angles in degrees: a,b,c or START:STOP:STEP");
  app->add_option("--trials", c.trials, "Trials per grid point")->check(CLI::PositiveNumber);
  app->add_option("--seed", c.seed, "Master seed (default: $MISSPEC_SEED or 1)");
  app->add_option("--threads", c.threads, "Worker threads (0 = all cores)");
  app->add_option("--out", c.out, "Output path, - for stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Loss from optimizing a misspecified linear objective"};
  app.set_version_flag("--version", MISSPEC_VERSION);
  app.require_subcommand(1);

  RunConfig c;
  Raw raw;
  try {
    c.seed = misspec::cli::default_seed();
  } catch (const std::exception& e) {
    std::cerr << "misspec: " << e.what() << "\n";
    return 2;
  }

  auto* bound = app.add_subcommand("bound", "Worst-case scaled-loss bound and its attainment");
  bound->add_option("--r", c.r, "Inner radius r in (0, 1)")->required();
  bound->add_option("--alpha", c.bound_alpha_deg, "Angle in degrees")->required();
  bound->add_option("--slack", c.hypothesis_slack,
                    "Allowance in sin(alpha) <= r <= cos(alpha) for rounded angles");
  bound->add_option("--out", c.out, "Output path, - for stdout");

  auto* experiment = app.add_subcommand("experiment", "Loss statistics over an alpha grid (CSV)");
  add_common(experiment, c, raw, true);
  auto* netlib = app.add_subcommand("netlib", "Experiment on the feasible region of an MPS file");
  add_common(netlib, c, raw, true);
  auto* swap = app.add_subcommand("swap", "Component-swap model over an alpha grid (CSV)");
  add_common(swap, c, raw, false);
  swap->add_option("--density", c.model.density, "gaussian | uniform | laplace | mixed")
      ->check(CLI::IsMember({"gaussian", "uniform", "laplace", "mixed"}));
  auto* identities = app.add_subcommand("identities", "z-scores of the expectation identities");
  add_common(identities, c, raw, true);

  auto* perturb = app.add_subcommand("perturb-binary",
                                     "Gaussian perturbation of a fixed objective over {0,1}^N");
  perturb->add_option("--n", c.binary_n, "Number of binary variables")->check(CLI::Range(1, 40));
  perturb->add_option("--sigma-grid", raw.sigma_grid, "Noise levels: a,b,c or START:STOP:STEP");
  perturb->add_option("--weights", raw.weights, "True objective w as a comma-separated list");
  perturb->add_option("--knapsack", c.knapsack_fraction,
                      "Add a random knapsack row with capacity FRACTION * sum(a)");
  perturb->add_option("--trials", c.trials, "Trials per sigma")->check(CLI::PositiveNumber);
  perturb->add_option("--seed", c.seed, "Master seed (default: $MISSPEC_SEED or 1)");
  perturb->add_option("--threads", c.threads, "Worker threads (0 = all cores)");
  perturb->add_option("--out", c.out, "Output path, - for stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*bound) c.command = Command::kBound;
    if (*experiment) c.command = Command::kExperiment;
    if (*netlib) c.command = Command::kNetlib;
    if (*swap) c.command = Command::kSwap;
    if (*identities) c.command = Command::kIdentities;
    if (*perturb) c.command = Command::kPerturbBinary;

    c.region.kind = raw.region.at(0);
    if (raw.region.size() > 1) c.region.arg = raw.region[1];
    if (c.command != Command::kSwap) {
      c.model.kind = raw.model.at(0);
      if (raw.model.size() > 1) c.model.arg = raw.model[1];
    }
    c.model.base = raw.base == "pd2" ? misspec::BaseModel::kPD2 : misspec::BaseModel::kPD1;
    if (!raw.alpha_grid.empty()) c.alpha_grid_deg = misspec::cli::parse_grid(raw.alpha_grid);
    if (!raw.sigma_grid.empty()) c.sigma_grid = misspec::cli::parse_grid(raw.sigma_grid);
    if (!raw.weights.empty()) c.weights = misspec::cli::parse_grid(raw.weights);

    misspec::cli::write_output(c.out, misspec::cli::run(c));
  } catch (const std::exception& e) {
    std::cerr << "misspec: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
