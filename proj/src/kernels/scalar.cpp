// Copyright 2026 The misspec Authors
// SPDX-License-Identifier: Apache-2.0

#include "misspec/kernels.hpp"

namespace misspec::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale_scalar(double alpha, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

void gemv_scalar(const double* m, std::size_t rows, std::size_t cols,
                 const double* x, double* out) {
  for (std::size_t r = 0; r < rows; ++r) {
    out[r] = dot_scalar(m + r * cols, x, cols);
  }
}

}  // namespace

const KernelTable& scalar_table() noexcept {
  static constexpr KernelTable table{"scalar", dot_scalar, axpy_scalar,
                                     scale_scalar, gemv_scalar};
  return table;
}

}  // namespace misspec::kernels
