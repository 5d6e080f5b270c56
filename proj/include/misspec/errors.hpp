// Copyright 2026 The misspec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace misspec {

/// Invalid caller input: wrong dimensions, out-of-range parameters.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The simplex kernel could not finish (iteration cap, lost feasibility).
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, std::size_t iterations)
      : std::runtime_error(what + " (after " + std::to_string(iterations) +
                           " iterations)"),
        iterations_(iterations) {}

  std::size_t iterations() const noexcept { return iterations_; }

 private:
  std::size_t iterations_;
};

/// A support query found the region unbounded (or empty) in the requested
/// direction, so the region is not a compact nonempty set.
class UnboundedRegionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// ran(w) is zero up to roundoff; the scaled loss is undefined.
class DegenerateRangeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace misspec
