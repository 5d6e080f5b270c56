// Copyright 2026 The misspec Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <unistd.h>

#include "misspec/errors.hpp"
#include "misspec/mps.hpp"

#ifndef MISSPEC_VERSION
#define MISSPEC_VERSION "unknown"
#endif

namespace misspec::cli {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

double parse_double(const std::string& s, const char* what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ArgumentError(std::string(what) + ": not a number: '" + s + "'");
  }
  return v;
}

std::size_t parse_count(const std::string& s, const char* what) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v == 0) {
    throw ArgumentError(std::string(what) + ": expected a positive integer, got '" + s + "'");
  }
  return v;
}

std::vector<std::vector<double>> read_points(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open points file '" + path + "'");
  std::vector<std::vector<double>> pts;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    for (char& c : line) {
      if (c == ',') c = ' ';
    }
    std::istringstream is(line);
    std::vector<double> p;
    std::string tok;
    while (is >> tok) p.push_back(parse_double(tok, "points file"));
    if (p.empty()) continue;
    if (!pts.empty() && p.size() != pts.front().size()) {
      throw ArgumentError("points file: rows have different lengths");
    }
    pts.push_back(std::move(p));
  }
  if (pts.empty()) throw ArgumentError("points file '" + path + "' has no points");
  return pts;
}

void check_alpha_deg(double deg) {
  if (!(deg > 0.0 && deg < 90.0)) {
    throw ArgumentError("alpha must lie in (0, 90) degrees, got " + num(deg));
  }
}

std::string region_label(const RegionSpec& spec) {
  return spec.arg.empty() ? spec.kind : spec.kind + " " + spec.arg;
}

void metadata(std::ostringstream& os, const char* command, const RunConfig& c,
              const std::string& region, const std::string& model) {
  os << "# misspec " << MISSPEC_VERSION << "\n"
     << "# command: " << command << "\n"
     << "# region: " << region << "\n"
     << "# model: " << model << "\n"
     << "# seed: " << c.seed << "\n"
     << "# trials: " << c.trials << "\n";
}

void csv_row(std::ostringstream& os, double alpha_deg, const ExperimentResult& r) {
  os << num(alpha_deg) << ',' << r.trials << ',' << num(r.ratio_of_expectations) << ','
     << num(r.stderr_ratio_of_expectations) << ',' << num(r.expectation_of_ratio) << ','
     << num(r.stderr_expectation_of_ratio) << ',' << num(r.theory()) << ','
     << num(r.mean_max_w) << ',' << num(r.mean_max_v) << ',' << num(r.mean_range) << ','
     << r.skipped_trials;
}

ExperimentOptions options(const RunConfig& c) { return {c.trials, c.seed, c.threads}; }

std::string model_label(const ModelSpec& m) {
  std::string s = m.kind;
  if (!m.arg.empty()) s += " " + m.arg;
  if (m.kind == "random-alpha") s += m.base == BaseModel::kPD1 ? " base=pd1" : " base=pd2";
  if (m.kind == "swap") s += " density=" + m.density;
  return s;
}

std::string sweep(const RunConfig& c, const char* command, const Region& region,
                  const ModelSpec& model, const std::string& extra_meta) {
  std::ostringstream os;
  metadata(os, command, c, region_label(c.region) + " -> " + region.describe(),
           model_label(model));
  os << extra_meta << kCsvHeader << "\n";
  for (double deg : c.alpha_grid_deg) {
    check_alpha_deg(deg);
    const SamplerSpec spec = build_sampler(model, deg, region.dimension());
    csv_row(os, deg, run_experiment(region, spec, options(c)));
    os << "\n";
  }
  return os.str();
}

std::string cmd_bound(const RunConfig& c) {
  const double alpha = c.bound_alpha_deg * kDeg;
  WorstCaseParams params;
  try {
    params = WorstCaseParams::make(c.r, alpha, c.hypothesis_slack);
  } catch (const ArgumentError& e) {
    throw ArgumentError(std::string(e.what()) +
                        "; the bound needs rB^2 <= C <= B^2 with sin(alpha) <= r <= cos(alpha)");
  }
  const double bound = worst_case_bound(params);
  ObjectivePair p;
  p.v = {0.0, 1.0};
  p.w = {std::sin(alpha), std::cos(alpha)};
  const double attained = scaled_loss(make_worst_case_instance(c.r), p);
  std::ostringstream os;
  os << "r,rho,alpha_deg,bound,attained,sin_alpha_over_r\n"
     << num(params.r) << ',' << num(params.rho) << ',' << num(c.bound_alpha_deg) << ','
     << num(bound) << ',' << num(attained) << ',' << num(std::sin(alpha) / c.r) << "\n";
  return os.str();
}

std::string cmd_identities(const RunConfig& c) {
  const Region region = build_region(c.region);
  std::ostringstream os;
  metadata(os, "identities", c, region_label(c.region) + " -> " + region.describe(),
           model_label(c.model));
  if (c.trials < 100) os << "# warning: fewer than 100 trials, z-scores are unreliable\n";
  os << "alpha_deg,trials,z_max_v,z_range,z_loss,pass\n";
  for (double deg : c.alpha_grid_deg) {
    check_alpha_deg(deg);
    const auto res = run_experiment(region, build_sampler(c.model, deg, region.dimension()),
                                    options(c));
    const auto rep = check_expectation_identities(res);
    os << num(deg) << ',' << res.trials << ',' << num(rep.checks[0].z) << ','
       << num(rep.checks[1].z) << ',' << num(rep.checks[2].z) << ','
       << (rep.all_pass() ? "yes" : "no") << "\n";
  }
  return os.str();
}

std::string cmd_netlib(const RunConfig& c) {
  if (c.region.kind != "mps") throw ArgumentError("netlib: pass --region mps FILE");
  const MpsProblem problem = parse_mps_file(c.region.arg);
  const Region region = to_region(problem);
  if (c.model.kind != "pd1" && c.model.kind != "pd2") {
    throw ArgumentError("netlib: --model must be pd1 or pd2");
  }
  std::ostringstream meta;
  meta << "# mps: " << problem.name << " rows=" << problem.num_rows()
       << " columns=" << problem.num_columns() << "\n";
  try {
    return sweep(c, "netlib", region, c.model, meta.str());
  } catch (const UnboundedRegionError& e) {
    throw UnboundedRegionError(std::string("netlib: the feasible region of ") + problem.name +
                               " is unbounded or empty along a sampled objective, so its range "
                               "is not finite (" + e.what() + ")");
  }
}

std::string cmd_perturb_binary(const RunConfig& c) {
  std::vector<double> w = c.weights;
  if (w.empty()) {
    RngStream rng(c.seed, ~std::uint64_t{0});
    w = standard_gaussian_vector(c.binary_n, rng);
  }
  if (w.size() != c.binary_n) throw ArgumentError("perturb-binary: --weights needs N entries");
  std::optional<Knapsack> knapsack;
  if (c.knapsack_fraction) {
    RngStream rng(c.seed, ~std::uint64_t{0} - 1);
    Knapsack k{std::vector<double>(c.binary_n), 0.0};
    double total = 0.0;
    for (double& a : k.weights) total += (a = 0.5 + rng.uniform());
    k.capacity = *c.knapsack_fraction * total;
    knapsack = std::move(k);
  }
  const Region region = Region::binary_set(c.binary_n, knapsack);
  std::ostringstream os;
  metadata(os, "perturb-binary", c, region.describe(), "perturb-binary");
  os << "# w:";
  for (double x : w) os << ' ' << num(x);
  os << "\n" << kCsvHeader << ",sigma\n";
  for (double sigma : c.sigma_grid) {
    const auto res = perturb_binary_experiment(region, w, sigma, options(c));
    csv_row(os, res.alpha / kDeg, res);
    os << ',' << num(sigma) << "\n";
  }
  return os.str();
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<double> parts;
    std::istringstream is(text);
    std::string tok;
    while (std::getline(is, tok, ':')) parts.push_back(parse_double(tok, "grid"));
    if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0]) {
      throw ArgumentError("grid: expected START:STOP:STEP with STEP > 0 and STOP >= START");
    }
    const auto steps = static_cast<std::size_t>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
    for (std::size_t k = 0; k <= steps; ++k) out.push_back(parts[0] + k * parts[2]);
    return out;
  }
  std::istringstream is(text);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    if (!tok.empty()) out.push_back(parse_double(tok, "grid"));
  }
  if (out.empty()) throw ArgumentError("grid: empty");
  return out;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("MISSPEC_SEED")) {
    std::uint64_t v = 0;
    const std::string s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && ptr == s.data() + s.size()) return v;
    throw ArgumentError("MISSPEC_SEED is not an unsigned integer: '" + s + "'");
  }
  return 1;
}

Region build_region(const RegionSpec& s) {
  if (s.kind == "ball") {
    const std::size_t dim = s.arg.empty() ? 2 : parse_count(s.arg, "ball dimension");
    return Region::ball(std::vector<double>(dim, 0.0), 1.0);
  }
  if (s.kind == "square") return make_unit_square();
  if (s.kind == "points") return Region::point_set(read_points(s.arg));
  if (s.kind == "mps") return to_region(parse_mps_file(s.arg));
  if (s.kind == "worst-case") return make_worst_case_instance(parse_double(s.arg, "worst-case R"));
  if (s.kind == "binary") return Region::binary_set(parse_count(s.arg, "binary N"));
  if (s.kind == "random-polytope") {
    const std::size_t dim = s.arg.empty() ? 10 : parse_count(s.arg, "random-polytope dimension");
    return make_random_polytope(dim, 2 * dim, s.seed);
  }
  throw ArgumentError("unknown region '" + s.kind + "'");
}

SamplerSpec build_sampler(const ModelSpec& m, double alpha_deg, std::size_t dim) {
  const double alpha = alpha_deg * kDeg;
  if (m.kind == "pd1") return SamplerSpec::pd1(alpha);
  if (m.kind == "pd2") return SamplerSpec::pd2(alpha);
  if (m.kind == "swap") {
    std::vector<SymmetricDensity> f;
    for (std::size_t j = 0; j < dim; ++j) {
      const std::string kind = m.density == "mixed" ? (j % 3 == 0   ? "gaussian"
                                                       : j % 3 == 1 ? "uniform"
                                                                    : "laplace")
                                                    : m.density;
      if (kind == "gaussian") {
        f.push_back(SymmetricDensity::gaussian());
      } else if (kind == "uniform") {
        f.push_back(SymmetricDensity::uniform(1.0));
      } else if (kind == "laplace") {
        f.push_back(SymmetricDensity::laplace(1.0));
      } else {
        throw ArgumentError("unknown density '" + m.density + "'");
      }
    }
    return SamplerSpec::swap(alpha, std::move(f));
  }
  if (m.kind == "random-alpha") {
    const std::string prefix = "uniform:";
    if (m.arg.rfind(prefix, 0) != 0) {
      throw ArgumentError("random-alpha: SPEC must be uniform:HALF_WIDTH (degrees)");
    }
    const double half = parse_double(m.arg.substr(prefix.size()), "random-alpha half width");
    const double lo = alpha_deg - half, hi = alpha_deg + half;
    if (!(half >= 0.0) || !(lo > 0.0) || !(hi < 90.0)) {
      throw ArgumentError("random-alpha: [alpha - w, alpha + w] must lie in (0, 90) degrees");
    }
    return SamplerSpec::random_alpha(AlphaDistribution::uniform(lo * kDeg, hi * kDeg), m.base);
  }
  throw ArgumentError("unknown model '" + m.kind + "'");
}

std::string run(const RunConfig& c) {
  if (c.trials < 1) throw ArgumentError("--trials must be >= 1");
  switch (c.command) {
    case Command::kBound:
      return cmd_bound(c);
    case Command::kExperiment:
      return sweep(c, "experiment", build_region(c.region), c.model, "");
    case Command::kSwap: {
      ModelSpec m = c.model;
      m.kind = "swap";
      return sweep(c, "swap", build_region(c.region), m, "");
    }
    case Command::kNetlib:
      return cmd_netlib(c);
    case Command::kPerturbBinary:
      return cmd_perturb_binary(c);
    case Command::kIdentities:
      return cmd_identities(c);
  }
  throw ArgumentError("unknown command");
}

void write_output(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text << std::flush;
    return;
  }
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << text;
    out.flush();
    if (!out) {
      out.close();
      std::filesystem::remove(tmp);
      throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename to '" + path + "': " + ec.message());
  }
}

}  // namespace misspec::cli
