// Copyright 2026 The clirbench Authors
// SPDX-License-Identifier: Apache-2.0

#include "clir/finetune.hpp"

#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "clir/error.hpp"
#include "test_util.hpp"

namespace clir {
namespace {

Vector random_vector(std::size_t d, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Vector v(d);
    for (auto& x : v) x = g(rng);
    return v;
}

TEST(Mnrl, Examples) {
    EXPECT_NEAR(mnrl_loss({1, 0}, {1, 0}, {{0, 1}}, 1.0), 0.3132616875182228, 1e-12);
    EXPECT_NEAR(mnrl_loss({1, 0}, {1, 0}, {{1, 0}, {2, 0}, {3, 0}}, 5.0), std::log(4.0), 1e-12);
    EXPECT_LT(mnrl_loss({1, 0}, {1, 0}, {{0, 1}, {-1, 0.2}}, 100.0), 1e-3);
    EXPECT_THROW(mnrl_loss({1, 0}, {1, 0}, {}, 1.0), Error);
}

TEST(MnrlBatch, DuplicatedPairsGiveLogTwo) {
    TrainingBatch b{{{1, 0}, {1, 0}}, {{1, 0}, {1, 0}}, {}, 20.0};
    EXPECT_NEAR(mnrl_batch_loss(b, AdapterMatrix::identity(2)), std::log(2.0), 1e-12);
}

TEST(MnrlBatch, IdentityAdapterMatchesPerInstanceMean) {
    std::mt19937_64 rng(4);
    TrainingBatch b;
    b.temperature = 5.0;
    for (int i = 0; i < 4; ++i) {
        b.queries.push_back(random_vector(3, rng));
        b.positives.push_back(random_vector(3, rng));
    }
    double expected = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        std::vector<Vector> neg;
        for (std::size_t j = 0; j < 4; ++j)
            if (j != i) neg.push_back(b.positives[j]);
        expected += mnrl_loss(b.queries[i], b.positives[i], neg, 5.0) / 4;
    }
    EXPECT_NEAR(mnrl_batch_loss(b, AdapterMatrix::identity(3)), expected, 1e-12);
}

TEST(MnrlBatch, SixteenPairsSeeFifteenNegatives) {
    TrainingBatch b;
    b.temperature = 1e-9;  // every similarity collapses to the same logit
    for (int i = 0; i < 16; ++i) {
        b.queries.push_back({1, static_cast<double>(i)});
        b.positives.push_back({1, static_cast<double>(i)});
    }
    EXPECT_NEAR(mnrl_batch_loss(b, AdapterMatrix::identity(2)), std::log(16.0), 1e-6);
}

TEST(MnrlBatch, GroupsExcludeSameQueryPositives) {
    TrainingBatch b{{{1, 0}, {1, 0}, {0, 1}}, {{1, 0}, {0.9, 0.1}, {0, 1}}, {"q", "q", "r"}, 20.0};
    TrainingBatch ungrouped = b;
    ungrouped.groups.clear();
    EXPECT_LT(mnrl_batch_loss(b, AdapterMatrix::identity(2)), mnrl_batch_loss(ungrouped, AdapterMatrix::identity(2)));
}

TEST(MnrlGradient, FiniteDifferences) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 3; ++trial) {
        TrainingBatch b;
        b.temperature = 3.0;
        for (int i = 0; i < 4; ++i) {
            b.queries.push_back(random_vector(5, rng));
            b.positives.push_back(random_vector(5, rng));
        }
        AdapterMatrix a{Matrix::identity(5)};
        for (auto& x : a.a.data()) x += 0.1 * random_vector(1, rng)[0];
        const auto lg = mnrl_gradient(b, a);
        EXPECT_NEAR(lg.loss, mnrl_batch_loss(b, a), 1e-12);
        const double h = 1e-6;
        for (std::size_t i = 0; i < 25; ++i) {
            AdapterMatrix p = a, m = a;
            p.a.data()[i] += h;
            m.a.data()[i] -= h;
            const double fd = (mnrl_batch_loss(b, p) - mnrl_batch_loss(b, m)) / (2 * h);
            EXPECT_NEAR(lg.gradient.data()[i], fd, 1e-6 + 1e-4 * std::abs(fd));
        }
    }
}

TEST(MnrlGradient, ZeroAtToyMinimum) {
    TrainingBatch b{{{1, 0}, {0, 1}}, {{1, 0}, {0, 1}}, {}, 20.0};
    AdapterMatrix a{Matrix(2, 2)};
    a.a(0, 0) = 1;
    a.a(0, 1) = -1;
    const auto lg = mnrl_gradient(b, a);
    EXPECT_LE(frobenius_norm(lg.gradient), 1e-6);
}

TEST(MnrlGradient, SinglePairBatchHasNoNegatives) {
    EXPECT_THROW(mnrl_gradient(TrainingBatch{{{1, 0}}, {{1, 0}}, {}, 1.0}, AdapterMatrix::identity(2)), Error);
}

TEST(Train, ZeroLearningRateKeepsIdentity) {
    std::mt19937_64 rng(1);
    std::vector<TrainingPair> pairs;
    for (int i = 0; i < 10; ++i) pairs.push_back({random_vector(3, rng), random_vector(3, rng), std::to_string(i)});
    TrainOptions o;
    o.learning_rate = 0.0;
    o.epochs = 2;
    o.batch_size = 4;
    const auto r = train_adapter(pairs, o);
    EXPECT_EQ(r.adapter.a, Matrix::identity(3));
    EXPECT_EQ(r.epoch_losses.size(), 2u);
}

TEST(Train, ImprovesPositiveCosineOnPlantedRotation) {
    std::mt19937_64 rng(17);
    const std::size_t d = 6;
    const Matrix r = testing::random_orthogonal(d, rng);
    std::vector<TrainingPair> pairs;
    for (int i = 0; i < 64; ++i) {
        Vector q = random_vector(d, rng);
        Vector p(d, 0.0);
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = 0; b < d; ++b) p[b] += q[a] * r(a, b);
        pairs.push_back({q, p, std::to_string(i)});
    }
    TrainOptions o;
    o.epochs = 20;
    o.batch_size = 16;
    o.learning_rate = 0.05;
    const auto trained = train_adapter(pairs, o);
    EXPECT_GT(mean_positive_cosine(pairs, trained.adapter),
              mean_positive_cosine(pairs, AdapterMatrix::identity(d)));
    EXPECT_EQ(train_adapter(pairs, o).adapter.a, trained.adapter.a);
}

TEST(Shuffle, DeterministicPermutation) {
    const auto a = shuffled_indices(20, 5);
    EXPECT_EQ(a, shuffled_indices(20, 5));
    EXPECT_NE(a, shuffled_indices(20, 6));
    EXPECT_EQ(std::set<std::size_t>(a.begin(), a.end()).size(), 20u);
}

TEST(KFold, SizesAndDeterminism) {
    std::vector<std::string> q;
    for (int i = 0; i < 60; ++i) q.push_back("q" + std::to_string(i));
    const auto f = kfold_split(q, 10, 42);
    for (std::size_t i = 0; i < 10; ++i) {
        EXPECT_EQ(f.fold(i).size(), 6u);
        EXPECT_EQ(f.complement(i).size(), 54u);
        EXPECT_NO_THROW(assert_no_leakage(f.complement(i), f.fold(i)));
    }
    EXPECT_EQ(kfold_split(q, 10, 42).fold_of, f.fold_of);
    const auto loo = kfold_split(q, 60, 1);
    for (std::size_t i = 0; i < 60; ++i) EXPECT_EQ(loo.fold(i).size(), 1u);
    EXPECT_THROW(assert_no_leakage({"a", "b"}, {"b"}), Error);
    EXPECT_THROW(kfold_split(q, 61, 1), Error);
}

TEST(Distillation, Examples) {
    EXPECT_EQ(distillation_loss({{1, 2}}, {{1, 2}}, {{1, 2}}), 0.0);
    EXPECT_DOUBLE_EQ(distillation_loss({{1, 0}}, {{0, 0}}, {{1, 0}}), 1.0);
}

}  // namespace
}  // namespace clir
