// Copyright 2026 The clirbench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <utility>
#include <vector>

#include "clir/corpus.hpp"
#include "clir/embeddings.hpp"
#include "clir/linalg.hpp"

namespace clir {

/// Ordered (source, target) word translation pairs.
struct BilingualDictionary {
    std::vector<std::pair<Token, Token>> pairs;

    std::size_t size() const { return pairs.size(); }
    bool empty() const { return pairs.empty(); }
};

/// `<source>\t<target>` per line; blank lines and lines starting with '#'
/// are ignored.
BilingualDictionary read_dictionary(const std::filesystem::path& path);

struct DictionaryFilter {
    BilingualDictionary usable;
    /// Pairs with a token missing from the source or target store.
    std::vector<std::pair<Token, Token>> excluded;
};

DictionaryFilter filter_dictionary(const BilingualDictionary& dict, const EmbeddingStore& src,
                                   const EmbeddingStore& tgt);

/// Row-aligned X_S, X_T for the dictionary. Every pair must be in vocabulary.
std::pair<Matrix, Matrix> assemble_matrices(const BilingualDictionary& dict, const EmbeddingStore& src,
                                            const EmbeddingStore& tgt);

/// Orthogonal map applied on the right: projected = v * W.
struct ProjectionMatrix {
    Matrix w;
    /// The cross-covariance was rank deficient, so the solution is not unique;
    /// the deterministic completion of the SVD basis was used.
    bool rank_deficient = false;

    std::size_t dim() const { return w.rows(); }
};

/// argmin over orthogonal W of ||X_S W - X_T||_F, solved as W = U V^T from
/// the SVD of X_S^T X_T.
ProjectionMatrix procrustes(const Matrix& xs, const Matrix& xt);

/// ||X_S W - X_T||_F.
double procrustes_residual(const Matrix& xs, const Matrix& xt, const Matrix& w);

/// Every row multiplied by W; vocabulary unchanged.
EmbeddingStore project(const EmbeddingStore& store, const ProjectionMatrix& w);

struct NeighbourSearch {
    /// Restrict the candidate sets to the first `limit` rows of each store
    /// (stores are frequency ordered). Full vocabularies when unset.
    std::optional<std::size_t> limit;
    bool parallel = true;
};

/// Seed pairs (in seed order) followed by every mutual nearest-neighbour pair
/// (s, t) under cosine in the projected space, in source vocabulary order,
/// skipping pairs already present.
BilingualDictionary mutual_nn_augment(const EmbeddingStore& src, const EmbeddingStore& tgt,
                                      const ProjectionMatrix& w, const BilingualDictionary& seed,
                                      const NeighbourSearch& search = {});

struct ProcBResult {
    ProjectionMatrix projection;
    BilingualDictionary dictionary;       // dictionary used for the final solve
    std::vector<double> residuals;        // per round, over that round's dictionary
    std::vector<std::size_t> dictionary_sizes;
    std::vector<std::pair<Token, Token>> excluded_seed_pairs;
};

/// Round r solves Procrustes on the current dictionary; between rounds the
/// dictionary is extended with mutual nearest neighbours. `iterations` = 1 is
/// plain Procrustes on the usable seed pairs. Throws "no trainable pairs" when
/// no seed pair is in vocabulary.
ProcBResult proc_b(const EmbeddingStore& src, const EmbeddingStore& tgt, const BilingualDictionary& seed,
                   std::size_t iterations, const NeighbourSearch& search = {});

/// Stored in the EMB1 container with row indices "0".."d-1" as keys.
void write_matrix(const Matrix& m, const std::filesystem::path& path);
Matrix read_matrix(const std::filesystem::path& path);

}  // namespace clir
