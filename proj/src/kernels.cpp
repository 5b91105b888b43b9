// Copyright 2026 The clirbench Authors
// SPDX-License-Identifier: Apache-2.0

#include "clir/kernels.hpp"

#include <cmath>
#include <cstdint>

#include "clir/error.hpp"

namespace clir::kernels {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double cosine(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DimensionError("cosine: dimension mismatch");
    const double na = norm(a);
    const double nb = norm(b);
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot(a, b) / (na * nb);
}

namespace {

template <typename T>
double row_cosine(std::span<const double> q, double qnorm, std::span<const T> r) {
    double d = 0.0;
    double rr = 0.0;
    for (std::size_t k = 0; k < r.size(); ++k) {
        const double x = static_cast<double>(r[k]);
        d += q[k] * x;
        rr += x * x;
    }
    if (rr == 0.0) return -1.0;
    if (qnorm == 0.0) return 0.0;
    return d / (qnorm * std::sqrt(rr));
}

template <typename T>
void normalize_into(std::span<const T> r, std::span<double> out) {
    double s = 0.0;
    for (T x : r) s += static_cast<double>(x) * static_cast<double>(x);
    const double n = std::sqrt(s);
    for (std::size_t k = 0; k < r.size(); ++k) out[k] = n == 0.0 ? 0.0 : static_cast<double>(r[k]) / n;
}

std::size_t argmax_dot(std::span<const double> q, RowView<double> base) {
    std::size_t best = 0;
    double best_score = -INFINITY;
    for (std::size_t j = 0; j < base.rows; ++j) {
        const double s = dot(q, base.row(j));
        if (s > best_score) {
            best_score = s;
            best = j;
        }
    }
    return best;
}

void check_nn(RowView<double> queries, RowView<double> base) {
    if (queries.dim != base.dim) throw DimensionError("nearest_rows: dimension mismatch");
    if (base.rows == 0) throw Error("nearest_rows: empty base");
}

void cov_row(const Matrix& xs, const Matrix& xt, Matrix& out, std::size_t a) {
    auto dst = out.row(a);
    for (std::size_t k = 0; k < xs.rows(); ++k) {
        const double s = xs(k, a);
        const auto t = xt.row(k);
        for (std::size_t b = 0; b < xt.cols(); ++b) dst[b] += s * t[b];
    }
}

void check_cov(const Matrix& xs, const Matrix& xt) {
    if (xs.rows() != xt.rows() || xs.cols() != xt.cols()) {
        throw DimensionError("cross_covariance: matrices must have identical shapes");
    }
}

void project_row(std::span<const float> r, const Matrix& w, std::span<float> out) {
    std::vector<double> acc(w.cols(), 0.0);
    for (std::size_t k = 0; k < r.size(); ++k) {
        const double x = r[k];
        const auto wr = w.row(k);
        for (std::size_t j = 0; j < w.cols(); ++j) acc[j] += x * wr[j];
    }
    for (std::size_t j = 0; j < w.cols(); ++j) out[j] = static_cast<float>(acc[j]);
}

void check_project(RowView<float> rows, const Matrix& w) {
    if (w.rows() != rows.dim) throw DimensionError("project_rows: matrix rows must equal vector dimension");
}

}  // namespace

namespace serial {

template <typename T>
std::vector<double> cosine_scores(std::span<const double> query, RowView<T> rows) {
    if (query.size() != rows.dim) throw DimensionError("cosine_scores: dimension mismatch");
    const double qn = norm(query);
    std::vector<double> out(rows.rows);
    for (std::size_t i = 0; i < rows.rows; ++i) out[i] = row_cosine(query, qn, rows.row(i));
    return out;
}

template <typename T>
std::vector<double> normalize_rows(RowView<T> rows) {
    std::vector<double> out(rows.rows * rows.dim);
    for (std::size_t i = 0; i < rows.rows; ++i)
        normalize_into(rows.row(i), std::span<double>(out).subspan(i * rows.dim, rows.dim));
    return out;
}

std::vector<std::size_t> nearest_rows(RowView<double> queries, RowView<double> base) {
    check_nn(queries, base);
    std::vector<std::size_t> out(queries.rows);
    for (std::size_t i = 0; i < queries.rows; ++i) out[i] = argmax_dot(queries.row(i), base);
    return out;
}

Matrix cross_covariance(const Matrix& xs, const Matrix& xt) {
    check_cov(xs, xt);
    Matrix out(xs.cols(), xt.cols());
    for (std::size_t a = 0; a < xs.cols(); ++a) cov_row(xs, xt, out, a);
    return out;
}

std::vector<float> project_rows(RowView<float> rows, const Matrix& w) {
    check_project(rows, w);
    std::vector<float> out(rows.rows * w.cols());
    for (std::size_t i = 0; i < rows.rows; ++i)
        project_row(rows.row(i), w, std::span<float>(out).subspan(i * w.cols(), w.cols()));
    return out;
}

template std::vector<double> cosine_scores<float>(std::span<const double>, RowView<float>);
template std::vector<double> cosine_scores<double>(std::span<const double>, RowView<double>);
template std::vector<double> normalize_rows<float>(RowView<float>);
template std::vector<double> normalize_rows<double>(RowView<double>);

}  // namespace serial

namespace parallel {

template <typename T>
std::vector<double> cosine_scores(std::span<const double> query, RowView<T> rows) {
    if (query.size() != rows.dim) throw DimensionError("cosine_scores: dimension mismatch");
    const double qn = norm(query);
    std::vector<double> out(rows.rows);
    const auto n = static_cast<std::int64_t>(rows.rows);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) out[i] = row_cosine(query, qn, rows.row(i));
    return out;
}

template <typename T>
std::vector<double> normalize_rows(RowView<T> rows) {
    std::vector<double> out(rows.rows * rows.dim);
    const auto n = static_cast<std::int64_t>(rows.rows);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i)
        normalize_into(rows.row(i), std::span<double>(out).subspan(i * rows.dim, rows.dim));
    return out;
}

std::vector<std::size_t> nearest_rows(RowView<double> queries, RowView<double> base) {
    check_nn(queries, base);
    std::vector<std::size_t> out(queries.rows);
    const auto n = static_cast<std::int64_t>(queries.rows);
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < n; ++i) out[i] = argmax_dot(queries.row(i), base);
    return out;
}

Matrix cross_covariance(const Matrix& xs, const Matrix& xt) {
    check_cov(xs, xt);
    Matrix out(xs.cols(), xt.cols());
    const auto n = static_cast<std::int64_t>(xs.cols());
#pragma omp parallel for schedule(static)
    for (std::int64_t a = 0; a < n; ++a) cov_row(xs, xt, out, a);
    return out;
}

std::vector<float> project_rows(RowView<float> rows, const Matrix& w) {
    check_project(rows, w);
    std::vector<float> out(rows.rows * w.cols());
    const auto n = static_cast<std::int64_t>(rows.rows);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i)
        project_row(rows.row(i), w, std::span<float>(out).subspan(i * w.cols(), w.cols()));
    return out;
}

template std::vector<double> cosine_scores<float>(std::span<const double>, RowView<float>);
template std::vector<double> cosine_scores<double>(std::span<const double>, RowView<double>);
template std::vector<double> normalize_rows<float>(RowView<float>);
template std::vector<double> normalize_rows<double>(RowView<double>);

}  // namespace parallel

}  // namespace clir::kernels
