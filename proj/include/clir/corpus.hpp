// Copyright 2026 The clirbench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace clir {

/// Lowercased, whitespace-free surface form.
using Token = std::string;

/// Half-open token index range [start, end).
struct Span {
    std::size_t start = 0;
    std::size_t end = 0;

    std::size_t size() const { return end - start; }
    friend bool operator==(const Span&, const Span&) = default;
};

struct Document {
    std::string id;
    std::vector<Token> tokens;
    /// Disjoint, sorted, covering [0, tokens.size()).
    std::vector<Span> sentence_spans;
};

/// A contiguous part of a document: a sliding-window segment or a sentence.
/// `position` is the 1-based ordinal of the part within its document.
struct Segment {
    std::string doc_id;
    std::size_t position = 1;
    Span span;

    friend bool operator==(const Segment&, const Segment&) = default;
};

enum class Granularity { document, segment, sentence };

Granularity parse_granularity(std::string_view name);
std::string_view to_string(Granularity g);

/// Lowercases, splits on Unicode whitespace and strips leading/trailing
/// punctuation from every token. Tokens that become empty are dropped.
std::vector<Token> tokenize(std::string_view text);

/// Rule-based splitter: a sentence ends at '.', '!' or '?' followed by
/// whitespace and then an uppercase letter or a digit. A period after a
/// single-letter initial (uppercase) or after one of the single-letter
/// abbreviations c, f, n, p, s, v does not end a sentence. Sentences are
/// returned trimmed of surrounding whitespace; no other character is lost.
std::vector<std::string> split_sentences(std::string_view text);

/// Sliding windows starting at 0, stride, 2*stride, ... The last window is
/// the first one whose end reaches tokens.size(). Requires 0 < stride <= window.
std::vector<Segment> segment(std::string_view doc_id, std::size_t num_tokens, std::size_t window,
                             std::size_t stride);

/// One Segment per sentence span, positions 1..n.
std::vector<Segment> sentence_parts(const Document& doc);

/// Parts of a document at the requested granularity. Document granularity
/// yields a single part covering every token.
std::vector<Segment> parts_of(const Document& doc, Granularity granularity, std::size_t window,
                              std::size_t stride);

/// Builds a Document from raw text: sentences first, then tokens per
/// sentence. Sentences without any token are dropped.
Document make_document(std::string id, std::string_view text);

class CollectionStats {
public:
    CollectionStats() = default;
    CollectionStats(std::size_t num_docs, std::unordered_map<Token, std::size_t> df);

    std::size_t num_docs() const { return num_docs_; }
    /// 0 for unseen tokens.
    std::size_t df(const Token& t) const;
    const std::unordered_map<Token, std::size_t>& df_map() const { return df_; }

private:
    std::size_t num_docs_ = 0;
    std::unordered_map<Token, std::size_t> df_;
};

/// Document frequencies over the collection. Throws on an empty collection.
CollectionStats collection_stats(const std::vector<Document>& docs);

/// ln(N / df(t)); ln(N) for tokens never seen in the collection.
double idf(const Token& t, const CollectionStats& stats);

/// Collection-wide term frequencies, the background model for query likelihood.
struct TermCounts {
    std::unordered_map<Token, std::size_t> cf;
    std::size_t total_tokens = 0;

    /// cf(t) / total_tokens, 0 for unseen.
    double probability(const Token& t) const;
};

TermCounts collection_term_counts(const std::vector<Document>& docs);

/// `<id>\t<text>` records, one per line. Blank lines are skipped.
struct TextRecord {
    std::string id;
    std::string text;
};
std::vector<TextRecord> read_text_records(const std::filesystem::path& path);

/// Reads a document collection file and builds Documents. Duplicate ids throw.
std::vector<Document> read_collection(const std::filesystem::path& path);

/// Part counts behind the slowdown factor of localized matching.
struct PartCounts {
    std::size_t documents = 0;
    std::size_t parts = 0;

    /// parts / documents.
    double factor() const;
};

PartCounts count_parts(const std::vector<Document>& docs, Granularity granularity, std::size_t window,
                       std::size_t stride);

}  // namespace clir
