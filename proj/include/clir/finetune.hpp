// Copyright 2026 The clirbench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "clir/embeddings.hpp"
#include "clir/linalg.hpp"

namespace clir {

/// Aligned query/positive vectors. Every other positive in the batch is an
/// in-batch negative for a query, except positives that share its group
/// (the same query id); `groups` may be left empty.
struct TrainingBatch {
    std::vector<Vector> queries;
    std::vector<Vector> positives;
    std::vector<std::string> groups;
    double temperature = 20.0;
};

/// Linear map applied to both queries and documents: x -> A x.
struct AdapterMatrix {
    Matrix a;

    static AdapterMatrix identity(std::size_t dim) { return AdapterMatrix{Matrix::identity(dim)}; }
    std::size_t dim() const { return a.rows(); }
    Vector apply(const Vector& x) const;
};

/// -log softmax of the positive among {positive} u negatives, over
/// temperature-scaled cosine similarities.
double mnrl_loss(const Vector& q, const Vector& d_pos, const std::vector<Vector>& negatives, double temperature);

/// Mean MNRL over the batch after mapping every vector through the adapter.
double mnrl_batch_loss(const TrainingBatch& batch, const AdapterMatrix& adapter);

struct LossAndGradient {
    double loss = 0.0;
    Matrix gradient;  // d loss / d A
};

/// Exact analytic gradient of mnrl_batch_loss with respect to A.
LossAndGradient mnrl_gradient(const TrainingBatch& batch, const AdapterMatrix& adapter);

struct TrainingPair {
    Vector query;
    Vector positive;
    std::string group;
};

struct TrainOptions {
    std::size_t epochs = 10;
    std::size_t batch_size = 16;
    double temperature = 20.0;
    double learning_rate = 0.05;
    std::uint64_t seed = 42;
};

struct TrainResult {
    AdapterMatrix adapter;
    /// Mean batch loss per epoch, measured before each update.
    std::vector<double> epoch_losses;
};

/// Plain SGD from the identity. Pairs are reshuffled every epoch from a
/// generator seeded once; a trailing batch with a single pair is skipped.
TrainResult train_adapter(const std::vector<TrainingPair>& pairs, const TrainOptions& options);

/// Mean cos(A q, A d+) over the pairs.
double mean_positive_cosine(const std::vector<TrainingPair>& pairs, const AdapterMatrix& adapter);

/// Deterministic Fisher-Yates permutation of 0..n-1 driven by mt19937_64.
std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed);

struct FoldAssignment {
    std::size_t k = 0;
    std::map<std::string, std::size_t> fold_of;

    /// Query ids of fold f, sorted.
    std::vector<std::string> fold(std::size_t f) const;
    /// Query ids outside fold f, sorted.
    std::vector<std::string> complement(std::size_t f) const;
};

/// Shuffle by seed, then deal round-robin into k folds.
FoldAssignment kfold_split(const std::vector<std::string>& query_ids, std::size_t k, std::uint64_t seed);

/// Throws if any evaluation query is also a training query.
void assert_no_leakage(const std::vector<std::string>& train_queries, const std::vector<std::string>& eval_queries);

/// (1/|B|) sum_j ||M(s_j) - M^(s_j)||^2 + ||M(s_j) - M^(t_j)||^2.
double distillation_loss(const std::vector<Vector>& teacher_s, const std::vector<Vector>& student_s,
                         const std::vector<Vector>& student_t);

}  // namespace clir
