// Copyright 2026 The clirbench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "clir/corpus.hpp"
#include "clir/embeddings.hpp"

namespace clir {

struct RankedDoc {
    std::string doc_id;
    double score = 0.0;

    friend bool operator==(const RankedDoc&, const RankedDoc&) = default;
};

/// Entries sorted by descending score, ties by ascending doc id.
struct Ranking {
    std::string query_id;
    std::vector<RankedDoc> entries;

    friend bool operator==(const Ranking&, const Ranking&) = default;
};

/// Sorts in place into canonical ranking order.
void sort_entries(std::vector<RankedDoc>& entries);

struct TextRepresentation {
    std::string id;
    Vector vector;
    /// No term of the text was in vocabulary; the vector is all zeros.
    bool empty = false;
};

/// Unweighted sum of the in-vocabulary term vectors.
TextRepresentation embed_query(std::string id, const std::vector<Token>& terms, const EmbeddingStore& store);

/// sum over term occurrences of idf(t) * emb(t); out-of-vocabulary terms skipped.
TextRepresentation embed_document(std::string id, std::span<const Token> terms, const EmbeddingStore& store,
                                  const CollectionStats& stats);

/// Cosine ranking of every document. Empty documents score -1.
Ranking rank(const TextRepresentation& query, const std::vector<TextRepresentation>& docs, bool parallel = true);

/// Mean of the k largest cosine(query, part) values (all parts when k exceeds
/// their number). Empty parts count as -1.
double localized_score(const TextRepresentation& query, std::span<const TextRepresentation> parts, std::size_t k);

struct DocParts {
    std::string doc_id;
    std::vector<TextRepresentation> parts;
    std::vector<std::size_t> positions;  // 1-based, aligned with parts
};

struct PartsIndex {
    Granularity granularity = Granularity::segment;
    std::vector<DocParts> docs;
};

/// Part vectors as idf-weighted sums over each part's tokens (static stores).
PartsIndex build_parts_index(const std::vector<Document>& docs, const EmbeddingStore& store,
                             const CollectionStats& stats, Granularity granularity, std::size_t window,
                             std::size_t stride);

struct LocalizedRanking {
    Ranking ranking;
    /// Documents that had no parts; they are ranked last with score -1.
    std::vector<std::string> docs_without_parts;
};

LocalizedRanking rank_localized(const TextRepresentation& query, const PartsIndex& index, std::size_t k,
                                bool parallel = true);

/// The `n` best-scoring parts across the whole index (ties by doc id, then
/// position), as Segments carrying their positions.
std::vector<Segment> top_parts(const TextRepresentation& query, const PartsIndex& index, std::size_t n);

/// Reorders the first min(top_n, |base|) entries by external score. Entries
/// in the window without an external score follow the scored ones in base
/// order. Window entries get new scores (position based, all above the rest);
/// the entries below the window keep their base scores.
Ranking rerank_merge(const Ranking& base, const std::unordered_map<std::string, double>& external_scores,
                     std::size_t top_n);

/// Query likelihood with Dirichlet smoothing:
/// sum_t log((tf(t,d) + mu p(t|C)) / (|d| + mu)); terms unseen in C skipped.
double qlm_dirichlet(const std::vector<Token>& query_terms, const Document& doc, const TermCounts& collection,
                     double mu);

Ranking rank_qlm(const std::string& query_id, const std::vector<Token>& query_terms,
                 const std::vector<Document>& docs, const TermCounts& collection, double mu);

/// Six-column run format `<qid> Q0 <docid> <rank> <score> <tag>`, 1-based
/// ranks, scores with 6 decimals. `depth` truncates each ranking.
void write_run(std::ostream& out, const std::vector<Ranking>& runs, const std::string& tag,
               std::size_t depth = SIZE_MAX);
void write_run(const std::filesystem::path& path, const std::vector<Ranking>& runs, const std::string& tag,
               std::size_t depth = SIZE_MAX);

/// Rankings in first-appearance query order, entries in file rank order.
std::vector<Ranking> read_run(const std::filesystem::path& path);

/// `<qid> <docid> <score>` lines (or six-column run lines), keyed by query.
std::map<std::string, std::unordered_map<std::string, double>> read_external_scores(
    const std::filesystem::path& path);

}  // namespace clir
