// Copyright 2026 The clirbench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "clir/corpus.hpp"

namespace clir {

/// Dense real vector used for all arithmetic. Stores keep float32 rows.
using Vector = std::vector<double>;

/// Immutable token -> vector map with a fixed dimension and a stable
/// vocabulary order. Rows live in one contiguous float buffer.
class EmbeddingStore {
public:
    EmbeddingStore() = default;
    /// `data` holds vocab.size() * dim floats, row-major. Throws on duplicate
    /// tokens, non-finite components or a size mismatch.
    EmbeddingStore(std::size_t dim, std::vector<Token> vocab, std::vector<float> data);

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return vocab_.size(); }
    bool empty() const { return vocab_.empty(); }

    const std::vector<Token>& vocab() const { return vocab_; }
    std::span<const float> data() const { return data_; }
    std::span<const float> row(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }

    std::optional<std::size_t> index_of(const Token& t) const;
    bool contains(const Token& t) const { return index_.count(t) != 0; }
    /// Row for `t`, or nullopt when out of vocabulary.
    std::optional<std::span<const float>> lookup(const Token& t) const;

    friend bool operator==(const EmbeddingStore& a, const EmbeddingStore& b) {
        return a.dim_ == b.dim_ && a.vocab_ == b.vocab_ && a.data_ == b.data_;
    }

private:
    std::size_t dim_ = 0;
    std::vector<Token> vocab_;
    std::vector<float> data_;
    std::unordered_map<Token, std::size_t> index_;
};

/// Builds a store from (token, vector) pairs in the given order.
EmbeddingStore make_store(std::size_t dim, const std::vector<std::pair<Token, Vector>>& entries);

/// Text container: header `<count> <dim>`, then `<token> v1 .. v_dim` per line.
/// `limit` keeps only the first entries (vocabulary truncation).
EmbeddingStore load_embeddings_text(const std::filesystem::path& path,
                                    std::optional<std::size_t> limit = std::nullopt);
/// Components printed with 6 decimals.
void write_embeddings_text(const EmbeddingStore& store, const std::filesystem::path& path);

/// Binary container: "EMB1", u32 count, u32 dim, then per entry a u16 token
/// byte length, the UTF-8 token bytes and dim little-endian float32 values.
void write_embeddings_binary(const EmbeddingStore& store, const std::filesystem::path& path);
EmbeddingStore read_embeddings_binary(const std::filesystem::path& path,
                                      std::optional<std::size_t> limit = std::nullopt);

/// Dispatches on the leading magic bytes.
EmbeddingStore load_embeddings(const std::filesystem::path& path,
                               std::optional<std::size_t> limit = std::nullopt);

/// Contextualized subword vectors of one term, in subword order.
struct SubwordGroup {
    std::vector<Vector> vectors;
};

/// Mean of the subword vectors.
Vector pool_subwords(const SubwordGroup& group);
/// The first subword's vector.
Vector first_subword(const SubwordGroup& group);

/// Contextual vectors of one term, capped at `cap` contexts.
struct ContextSet {
    Token term;
    std::vector<Vector> context_vectors;
    std::size_t cap = 60;
};

/// Keeps the first min(|available|, cap) contexts in corpus order.
ContextSet make_context_set(Token term, std::vector<Vector> available, std::size_t cap);

/// Average over the retained contexts, or `fallback` when there are none.
Vector aoc_embed(const ContextSet& ctx, const Vector& fallback);

/// sum_i idf_i * first_subword(group_i) + mean(idf) * (start + end).
Vector semb_embed(const std::vector<SubwordGroup>& token_groups, const std::vector<double>& idf_weights,
                  const std::pair<SubwordGroup, SubwordGroup>& special_tokens);

/// Widens a float row.
Vector to_vector(std::span<const float> row);

}  // namespace clir
