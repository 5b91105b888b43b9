// Copyright 2026 The clirbench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace clir {

/// Row-major dense matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    std::span<double> data() { return data_; }
    std::span<const double> data() const { return data_; }

    Matrix transposed() const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);

double frobenius_norm(const Matrix& m);
double max_abs(const Matrix& m);
/// max |(M^T M - I)_ij|.
double orthogonality_error(const Matrix& m);

struct SvdResult {
    Matrix u;                      // n x n, orthonormal columns
    std::vector<double> singular;  // descending
    Matrix v;                      // n x n, orthonormal columns
    bool rank_deficient = false;   // some singular value ~ 0; U completed arbitrarily
};

/// One-sided Jacobi SVD of a square matrix, A = U diag(s) V^T. Columns are
/// sorted by descending singular value; each U column is sign-normalized so
/// its largest-magnitude component is positive (V follows). Null-space
/// columns of U are completed by Gram-Schmidt over the standard basis.
SvdResult jacobi_svd(const Matrix& a, double tol = 1e-15, int max_sweeps = 100);

}  // namespace clir
