// Copyright 2026 The clirbench Authors
// SPDX-License-Identifier: Apache-2.0

#include "clir/kernels.hpp"

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace clir {
namespace {

using kernels::RowView;

std::vector<double> block(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = g(rng);
    return v;
}

TEST(Kernels, CosineBasics) {
    const std::vector<double> a{1, 0}, b{0, 1}, z{0, 0};
    EXPECT_DOUBLE_EQ(kernels::cosine(a, a), 1.0);
    EXPECT_DOUBLE_EQ(kernels::cosine(a, b), 0.0);
    EXPECT_DOUBLE_EQ(kernels::cosine(a, z), 0.0);
}

TEST(Kernels, CosineScoresZeroRowsScoreMinusOne) {
    const std::vector<double> rows{1, 0, 0, 0, 0, 2};
    const std::vector<double> q{1, 1};
    const auto s = kernels::serial::cosine_scores<double>(q, RowView<double>{rows, 3, 2});
    EXPECT_NEAR(s[0], 0.7071067811865475, 1e-15);
    EXPECT_EQ(s[1], -1.0);
    EXPECT_NEAR(s[2], 0.7071067811865475, 1e-15);
}

TEST(Kernels, SerialAndParallelAgreeExactly) {
    std::mt19937_64 rng(11);
    const std::size_t rows = 257, dim = 33;
    auto data = block(rows * dim, rng);
    for (std::size_t j = 0; j < dim; ++j) data[5 * dim + j] = 0.0;
    const auto q = block(dim, rng);
    const RowView<double> view{data, rows, dim};
    EXPECT_EQ(kernels::serial::cosine_scores<double>(q, view), kernels::parallel::cosine_scores<double>(q, view));
    EXPECT_EQ(kernels::serial::normalize_rows<double>(view), kernels::parallel::normalize_rows<double>(view));

    const std::vector<float> fdata(data.begin(), data.end());
    const RowView<float> fview{fdata, rows, dim};
    EXPECT_EQ(kernels::serial::cosine_scores<float>(q, fview), kernels::parallel::cosine_scores<float>(q, fview));

    const auto other = block(100 * dim, rng);
    const RowView<double> oview{other, 100, dim};
    EXPECT_EQ(kernels::serial::nearest_rows(view, oview), kernels::parallel::nearest_rows(view, oview));

    const Matrix xs = testing::random_gaussian(300, dim, rng);
    const Matrix xt = testing::random_gaussian(300, dim, rng);
    EXPECT_EQ(kernels::serial::cross_covariance(xs, xt), kernels::parallel::cross_covariance(xs, xt));
    EXPECT_LT(max_abs(kernels::serial::cross_covariance(xs, xt) - xs.transposed() * xt), 1e-9);

    const Matrix w = testing::random_gaussian(dim, dim, rng);
    EXPECT_EQ(kernels::serial::project_rows(fview, w), kernels::parallel::project_rows(fview, w));
}

TEST(Kernels, NearestRowsTiesGoToLowestIndex) {
    const std::vector<double> q{1, 0};
    const std::vector<double> base{0, 1, 2, 0, 1, 0};
    EXPECT_EQ(kernels::serial::nearest_rows(RowView<double>{q, 1, 2}, RowView<double>{base, 3, 2}),
              std::vector<std::size_t>{1});
}

}  // namespace
}  // namespace clir
