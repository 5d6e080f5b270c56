// Copyright 2026 The misspec Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Dense double-precision inner loops used by the simplex tableau, the
// point-set support scan, and the samplers. Each kernel has a portable
// scalar reference and, on x86-64, an AVX2 variant. The variant is chosen
// once per process from CPUID; setting MISSPEC_SIMD=scalar forces the
// reference path.
//
// axpy and scale are elementwise, so every variant is bit-identical to the
// scalar reference. dot and gemv reassociate the sum and agree with the
// reference to within a few ulps of sum(|a_i b_i|).

#include <cstddef>
#include <span>
#include <string_view>

namespace misspec::kernels {

struct KernelTable {
  std::string_view name;
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // x *= alpha
  void (*scale)(double alpha, double* x, std::size_t n);
  // out[r] = sum_c m[r * cols + c] * x[c]
  void (*gemv)(const double* m, std::size_t rows, std::size_t cols,
               const double* x, double* out);
};

const KernelTable& scalar_table() noexcept;

/// nullptr when the AVX2 variant was not compiled in or the CPU lacks
/// AVX2/FMA.
const KernelTable* avx2_table() noexcept;

/// The table selected for this process.
const KernelTable& active() noexcept;

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x,
                 std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), y.size());
}

inline void scale(double alpha, std::span<double> x) {
  active().scale(alpha, x.data(), x.size());
}

inline double norm2(std::span<const double> a) { return dot(a, a); }

}  // namespace misspec::kernels
