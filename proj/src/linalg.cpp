// Copyright 2026 The clirbench Authors
// SPDX-License-Identifier: Apache-2.0

#include "clir/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "clir/error.hpp"

namespace clir {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw DimensionError("matrix product: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                             " times " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    }
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto dst = out.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            const auto src = b.row(k);
            for (std::size_t j = 0; j < b.cols(); ++j) dst[j] += aik * src[j];
        }
    }
    return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("matrix difference: shape mismatch");
    Matrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.data().size(); ++i) out.data()[i] = a.data()[i] - b.data()[i];
    return out;
}

double frobenius_norm(const Matrix& m) {
    double s = 0.0;
    for (double x : m.data()) s += x * x;
    return std::sqrt(s);
}

double max_abs(const Matrix& m) {
    double best = 0.0;
    for (double x : m.data()) best = std::max(best, std::abs(x));
    return best;
}

double orthogonality_error(const Matrix& m) {
    return max_abs(m.transposed() * m - Matrix::identity(m.cols()));
}

namespace {

void rotate_columns(Matrix& m, std::size_t p, std::size_t q, double c, double s) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const double mp = m(i, p);
        const double mq = m(i, q);
        m(i, p) = c * mp - s * mq;
        m(i, q) = s * mp + c * mq;
    }
}

double column_dot(const Matrix& m, std::size_t p, std::size_t q) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) s += m(i, p) * m(i, q);
    return s;
}

}  // namespace

SvdResult jacobi_svd(const Matrix& a, double tol, int max_sweeps) {
    if (a.rows() != a.cols()) throw DimensionError("jacobi_svd: square matrix required");
    const std::size_t n = a.rows();
    Matrix g = a;
    Matrix v = Matrix::identity(n);

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double alpha = column_dot(g, p, p);
                const double beta = column_dot(g, q, q);
                const double gamma = column_dot(g, p, q);
                if (gamma == 0.0 || std::abs(gamma) <= tol * std::sqrt(alpha * beta)) continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                rotate_columns(g, p, q, c, s);
                rotate_columns(v, p, q, c, s);
            }
        }
        if (!rotated) break;
    }

    std::vector<double> sigma(n);
    for (std::size_t j = 0; j < n; ++j) sigma[j] = std::sqrt(column_dot(g, j, j));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

    SvdResult out{Matrix(n, n), std::vector<double>(n), Matrix(n, n), false};
    const double smax = n == 0 ? 0.0 : sigma[order[0]];
    const double cutoff = smax * static_cast<double>(n) * std::numeric_limits<double>::epsilon() * 16.0;
    std::vector<bool> filled(n, false);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t src = order[j];
        out.singular[j] = sigma[src];
        for (std::size_t i = 0; i < n; ++i) out.v(i, j) = v(i, src);
        if (sigma[src] > cutoff && sigma[src] > 0.0) {
            for (std::size_t i = 0; i < n; ++i) out.u(i, j) = g(i, src) / sigma[src];
            filled[j] = true;
        } else {
            out.rank_deficient = true;
        }
    }

    // Complete the null-space columns of U with an orthonormal basis.
    for (std::size_t j = 0; j < n; ++j) {
        if (filled[j]) continue;
        for (std::size_t k = 0; k < n; ++k) {
            std::vector<double> cand(n, 0.0);
            cand[k] = 1.0;
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t c = 0; c < n; ++c) {
                    if (!filled[c]) continue;
                    double d = 0.0;
                    for (std::size_t i = 0; i < n; ++i) d += out.u(i, c) * cand[i];
                    for (std::size_t i = 0; i < n; ++i) cand[i] -= d * out.u(i, c);
                }
            }
            double norm = 0.0;
            for (double x : cand) norm += x * x;
            norm = std::sqrt(norm);
            if (norm > 1e-3) {
                for (std::size_t i = 0; i < n; ++i) out.u(i, j) = cand[i] / norm;
                filled[j] = true;
                break;
            }
        }
    }

    // Deterministic signs: largest-magnitude component of each U column positive.
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t arg = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (std::abs(out.u(i, j)) > std::abs(out.u(arg, j)) + 1e-12) arg = i;
        if (out.u(arg, j) < 0.0) {
            for (std::size_t i = 0; i < n; ++i) {
                out.u(i, j) = -out.u(i, j);
                out.v(i, j) = -out.v(i, j);
            }
        }
    }
    return out;
}

}  // namespace clir
