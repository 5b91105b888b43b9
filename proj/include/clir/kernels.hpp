// Copyright 2026 The clirbench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "clir/linalg.hpp"

/// Data-parallel inner loops. Every kernel exists twice: `serial` is the
/// reference used by tests, `parallel` splits the outer loop over OpenMP
/// threads. Each output element is reduced by the same sequential loop in
/// both versions, so results are bit-identical for any thread count.
namespace clir::kernels {

/// Row-major block of `rows` vectors of length `dim`.
template <typename T>
struct RowView {
    std::span<const T> data;
    std::size_t rows = 0;
    std::size_t dim = 0;

    std::span<const T> row(std::size_t i) const { return data.subspan(i * dim, dim); }
};

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
/// Cosine similarity; 0 when either vector is zero.
double cosine(std::span<const double> a, std::span<const double> b);

namespace serial {

/// cos(query, row_i) for every row; zero rows score -1.
template <typename T>
std::vector<double> cosine_scores(std::span<const double> query, RowView<T> rows);

/// Unit-length copies of every row (zero rows stay zero).
template <typename T>
std::vector<double> normalize_rows(RowView<T> rows);

/// For each query row, the index of the base row with the largest dot
/// product; ties resolve to the lowest index.
std::vector<std::size_t> nearest_rows(RowView<double> queries, RowView<double> base);

/// xs^T * xt for row-aligned K x d matrices.
Matrix cross_covariance(const Matrix& xs, const Matrix& xt);

/// Every row multiplied on the right by w.
std::vector<float> project_rows(RowView<float> rows, const Matrix& w);

}  // namespace serial

namespace parallel {

template <typename T>
std::vector<double> cosine_scores(std::span<const double> query, RowView<T> rows);

template <typename T>
std::vector<double> normalize_rows(RowView<T> rows);

std::vector<std::size_t> nearest_rows(RowView<double> queries, RowView<double> base);

Matrix cross_covariance(const Matrix& xs, const Matrix& xt);

std::vector<float> project_rows(RowView<float> rows, const Matrix& w);

}  // namespace parallel

}  // namespace clir::kernels
