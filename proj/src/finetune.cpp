// Copyright 2026 The clirbench Authors
// SPDX-License-Identifier: Apache-2.0

#include "clir/finetune.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "clir/error.hpp"
#include "clir/kernels.hpp"

namespace clir {

Vector AdapterMatrix::apply(const Vector& x) const {
    if (x.size() != a.cols()) throw DimensionError("adapter: vector dimension mismatch");
    Vector out(a.rows(), 0.0);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        const auto row = a.row(r);
        double s = 0.0;
        for (std::size_t c = 0; c < x.size(); ++c) s += row[c] * x[c];
        out[r] = s;
    }
    return out;
}

namespace {

void require_nonzero(const Vector& v, const char* what) {
    if (kernels::norm(v) == 0.0) throw Error(std::string("mnrl: zero ") + what + " vector");
}

/// log sum exp(z) - z[0], i.e. -log softmax(z)[0].
double neg_log_softmax_first(const std::vector<double>& z) {
    const double mx = *std::max_element(z.begin(), z.end());
    double s = 0.0;
    for (double x : z) s += std::exp(x - mx);
    return std::log(s) + mx - z[0];
}

void validate(const TrainingBatch& batch) {
    if (batch.queries.size() != batch.positives.size()) throw DimensionError("batch: queries and positives differ in size");
    if (batch.queries.size() < 2) throw Error("no negatives: batch needs at least two pairs");
    if (!batch.groups.empty() && batch.groups.size() != batch.queries.size()) {
        throw DimensionError("batch: group labels misaligned");
    }
    if (!(batch.temperature > 0.0)) throw Error("batch: temperature must be positive");
}

bool is_negative(const TrainingBatch& batch, std::size_t i, std::size_t j) {
    if (i == j) return false;
    return batch.groups.empty() || batch.groups[i] != batch.groups[j];
}

}  // namespace

double mnrl_loss(const Vector& q, const Vector& d_pos, const std::vector<Vector>& negatives, double temperature) {
    if (negatives.empty()) throw Error("mnrl_loss: at least one negative required");
    require_nonzero(q, "query");
    require_nonzero(d_pos, "positive");
    std::vector<double> z;
    z.reserve(negatives.size() + 1);
    z.push_back(temperature * kernels::cosine(q, d_pos));
    for (const auto& n : negatives) {
        require_nonzero(n, "negative");
        z.push_back(temperature * kernels::cosine(q, n));
    }
    return neg_log_softmax_first(z);
}

double mnrl_batch_loss(const TrainingBatch& batch, const AdapterMatrix& adapter) {
    return mnrl_gradient(batch, adapter).loss;
}

LossAndGradient mnrl_gradient(const TrainingBatch& batch, const AdapterMatrix& adapter) {
    validate(batch);
    const std::size_t b = batch.queries.size();
    const std::size_t dim = adapter.dim();
    const double lambda = batch.temperature;

    std::vector<Vector> u(b);
    std::vector<Vector> v(b);
    std::vector<double> nu(b);
    std::vector<double> nv(b);
    for (std::size_t i = 0; i < b; ++i) {
        u[i] = adapter.apply(batch.queries[i]);
        v[i] = adapter.apply(batch.positives[i]);
        nu[i] = kernels::norm(u[i]);
        nv[i] = kernels::norm(v[i]);
        if (nu[i] == 0.0 || nv[i] == 0.0) throw Error("mnrl: zero vector after adapter");
    }

    std::vector<Vector> gu(b, Vector(dim, 0.0));
    std::vector<Vector> gv(b, Vector(dim, 0.0));
    double total = 0.0;
    std::vector<std::size_t> cols;
    std::vector<double> sims;
    std::vector<double> z;
    for (std::size_t i = 0; i < b; ++i) {
        cols.assign(1, i);
        for (std::size_t j = 0; j < b; ++j)
            if (is_negative(batch, i, j)) cols.push_back(j);
        sims.resize(cols.size());
        z.resize(cols.size());
        for (std::size_t c = 0; c < cols.size(); ++c) {
            sims[c] = kernels::dot(u[i], v[cols[c]]) / (nu[i] * nv[cols[c]]);
            z[c] = lambda * sims[c];
        }
        total += neg_log_softmax_first(z);

        const double mx = *std::max_element(z.begin(), z.end());
        double denom = 0.0;
        for (double x : z) denom += std::exp(x - mx);
        for (std::size_t c = 0; c < cols.size(); ++c) {
            const double p = std::exp(z[c] - mx) / denom;
            // d L_i / d s_ij, averaged over the batch.
            const double g = lambda * (p - (c == 0 ? 1.0 : 0.0)) / static_cast<double>(b);
            if (g == 0.0) continue;
            const std::size_t j = cols[c];
            const double s = sims[c];
            const double inv = 1.0 / (nu[i] * nv[j]);
            for (std::size_t k = 0; k < dim; ++k) {
                gu[i][k] += g * (v[j][k] * inv - s * u[i][k] / (nu[i] * nu[i]));
                gv[j][k] += g * (u[i][k] * inv - s * v[j][k] / (nv[j] * nv[j]));
            }
        }
    }

    LossAndGradient out{total / static_cast<double>(b), Matrix(dim, dim)};
    for (std::size_t i = 0; i < b; ++i) {
        for (std::size_t r = 0; r < dim; ++r) {
            auto row = out.gradient.row(r);
            for (std::size_t c = 0; c < dim; ++c) {
                row[c] += gu[i][r] * batch.queries[i][c] + gv[i][r] * batch.positives[i][c];
            }
        }
    }
    return out;
}

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::mt19937_64 rng(seed);
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(idx[i - 1], idx[j]);
    }
    return idx;
}

TrainResult train_adapter(const std::vector<TrainingPair>& pairs, const TrainOptions& options) {
    if (pairs.size() < 2) throw Error("train_adapter: at least two training pairs required");
    if (options.batch_size < 2) throw Error("train_adapter: batch size must be at least 2");
    const std::size_t dim = pairs.front().query.size();
    for (const auto& p : pairs) {
        if (p.query.size() != dim || p.positive.size() != dim) throw DimensionError("train_adapter: non-uniform dimension");
    }

    TrainResult result{AdapterMatrix::identity(dim), {}};
    std::mt19937_64 rng(options.seed);
    for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
        const auto order = shuffled_indices(pairs.size(), rng());
        double loss_sum = 0.0;
        std::size_t batches = 0;
        for (std::size_t start = 0; start < order.size(); start += options.batch_size) {
            const std::size_t end = std::min(start + options.batch_size, order.size());
            if (end - start < 2) continue;
            TrainingBatch batch;
            batch.temperature = options.temperature;
            for (std::size_t i = start; i < end; ++i) {
                const auto& p = pairs[order[i]];
                batch.queries.push_back(p.query);
                batch.positives.push_back(p.positive);
                batch.groups.push_back(p.group);
            }
            const auto lg = mnrl_gradient(batch, result.adapter);
            if (!std::isfinite(lg.loss)) throw Error("training diverged at epoch " + std::to_string(epoch));
            loss_sum += lg.loss;
            ++batches;
            auto a = result.adapter.a.data();
            const auto g = lg.gradient.data();
            for (std::size_t k = 0; k < a.size(); ++k) a[k] -= options.learning_rate * g[k];
            for (double x : a) {
                if (!std::isfinite(x)) throw Error("training diverged at epoch " + std::to_string(epoch));
            }
        }
        result.epoch_losses.push_back(batches == 0 ? 0.0 : loss_sum / static_cast<double>(batches));
    }
    return result;
}

double mean_positive_cosine(const std::vector<TrainingPair>& pairs, const AdapterMatrix& adapter) {
    if (pairs.empty()) return 0.0;
    double s = 0.0;
    for (const auto& p : pairs) s += kernels::cosine(adapter.apply(p.query), adapter.apply(p.positive));
    return s / static_cast<double>(pairs.size());
}

std::vector<std::string> FoldAssignment::fold(std::size_t f) const {
    std::vector<std::string> out;
    for (const auto& [q, g] : fold_of)
        if (g == f) out.push_back(q);
    return out;
}

std::vector<std::string> FoldAssignment::complement(std::size_t f) const {
    std::vector<std::string> out;
    for (const auto& [q, g] : fold_of)
        if (g != f) out.push_back(q);
    return out;
}

FoldAssignment kfold_split(const std::vector<std::string>& query_ids, std::size_t k, std::uint64_t seed) {
    if (k == 0) throw Error("kfold_split: k must be positive");
    if (query_ids.size() < k) {
        throw Error("kfold_split: " + std::to_string(query_ids.size()) + " queries for " + std::to_string(k) + " folds");
    }
    std::set<std::string> unique(query_ids.begin(), query_ids.end());
    if (unique.size() != query_ids.size()) throw Error("kfold_split: duplicate query ids");
    FoldAssignment out;
    out.k = k;
    const auto order = shuffled_indices(query_ids.size(), seed);
    for (std::size_t i = 0; i < order.size(); ++i) out.fold_of[query_ids[order[i]]] = i % k;
    return out;
}

void assert_no_leakage(const std::vector<std::string>& train_queries, const std::vector<std::string>& eval_queries) {
    const std::set<std::string> train(train_queries.begin(), train_queries.end());
    for (const auto& q : eval_queries) {
        if (train.count(q) != 0) throw Error("cross-validation leakage: query '" + q + "' is in both splits");
    }
}

double distillation_loss(const std::vector<Vector>& teacher_s, const std::vector<Vector>& student_s,
                         const std::vector<Vector>& student_t) {
    if (teacher_s.size() != student_s.size() || teacher_s.size() != student_t.size()) {
        throw DimensionError("distillation_loss: batch sizes differ");
    }
    if (teacher_s.empty()) throw Error("distillation_loss: empty batch");
    double total = 0.0;
    for (std::size_t j = 0; j < teacher_s.size(); ++j) {
        const auto& m = teacher_s[j];
        if (student_s[j].size() != m.size() || student_t[j].size() != m.size()) {
            throw DimensionError("distillation_loss: dimension mismatch");
        }
        for (std::size_t k = 0; k < m.size(); ++k) {
            const double a = m[k] - student_s[j][k];
            const double b = m[k] - student_t[j][k];
            total += a * a + b * b;
        }
    }
    return total / static_cast<double>(teacher_s.size());
}

}  // namespace clir
