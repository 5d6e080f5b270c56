// Copyright 2026 The misspec Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "misspec/kernels.hpp"

namespace {

using misspec::kernels::KernelTable;

std::vector<double> random_vec(std::mt19937_64& gen, std::size_t n) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = g(gen) * std::exp(3.0 * g(gen));
  return v;
}

class KernelEquivalence : public ::testing::Test {
 protected:
  void SetUp() override {
    simd_ = misspec::kernels::avx2_table();
    if (simd_ == nullptr) GTEST_SKIP() << "no SIMD variant on this host";
  }
  const KernelTable& ref_ = misspec::kernels::scalar_table();
  const KernelTable* simd_ = nullptr;
};

TEST_F(KernelEquivalence, AxpyAndScaleAreBitIdentical) {
  std::mt19937_64 gen(7);
  for (std::size_t n = 0; n < 70; ++n) {
    const auto x = random_vec(gen, n);
    const auto y0 = random_vec(gen, n);
    const double alpha = std::normal_distribution<double>()(gen);
    auto y_ref = y0;
    auto y_simd = y0;
    ref_.axpy(alpha, x.data(), y_ref.data(), n);
    simd_->axpy(alpha, x.data(), y_simd.data(), n);
    EXPECT_EQ(y_ref, y_simd) << "n=" << n;

    ref_.scale(alpha, y_ref.data(), n);
    simd_->scale(alpha, y_simd.data(), n);
    EXPECT_EQ(y_ref, y_simd) << "n=" << n;
  }
}

TEST_F(KernelEquivalence, DotAgreesWithinRoundoff) {
  std::mt19937_64 gen(11);
  for (std::size_t n = 0; n < 300; n += 7) {
    const auto a = random_vec(gen, n);
    const auto b = random_vec(gen, n);
    double abs_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) abs_sum += std::abs(a[i] * b[i]);
    const double tol = 4.0 * static_cast<double>(n + 1) * 1.1e-16 * abs_sum;
    EXPECT_NEAR(ref_.dot(a.data(), b.data(), n), simd_->dot(a.data(), b.data(), n), tol)
        << "n=" << n;
  }
}

TEST_F(KernelEquivalence, GemvMatchesRowDots) {
  std::mt19937_64 gen(3);
  const std::size_t rows = 37;
  const std::size_t cols = 19;
  const auto m = random_vec(gen, rows * cols);
  const auto x = random_vec(gen, cols);
  std::vector<double> out_ref(rows), out_simd(rows);
  ref_.gemv(m.data(), rows, cols, x.data(), out_ref.data());
  simd_->gemv(m.data(), rows, cols, x.data(), out_simd.data());
  for (std::size_t r = 0; r < rows; ++r) {
    double abs_sum = 0.0;
    for (std::size_t c = 0; c < cols; ++c) abs_sum += std::abs(m[r * cols + c] * x[c]);
    EXPECT_NEAR(out_ref[r], out_simd[r], 1e-14 * abs_sum);
  }
}

TEST(Kernels, ScalarReferenceValues) {
  const auto& k = misspec::kernels::scalar_table();
  const double a[] = {1.0, 2.0, 3.0};
  const double b[] = {4.0, -5.0, 6.0};
  EXPECT_EQ(k.dot(a, b, 3), 12.0);
  double y[] = {1.0, 1.0, 1.0};
  k.axpy(2.0, a, y, 3);
  EXPECT_EQ(y[2], 7.0);
}

TEST(Kernels, ActiveTableIsOneOfTheVariants) {
  const auto& active = misspec::kernels::active();
  const auto* simd = misspec::kernels::avx2_table();
  EXPECT_TRUE(&active == &misspec::kernels::scalar_table() || &active == simd);
}

}  // namespace
