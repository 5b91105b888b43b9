// Copyright 2026 The clirbench Authors
// SPDX-License-Identifier: Apache-2.0

#include "clir/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include "clir/error.hpp"
#include "clir/text.hpp"

namespace clir {

Granularity parse_granularity(std::string_view name) {
    const std::string lower = text::to_lower(name);
    if (lower == "document") return Granularity::document;
    if (lower == "segment") return Granularity::segment;
    if (lower == "sentence") return Granularity::sentence;
    throw Error("unknown granularity '" + std::string(name) + "' (expected document|segment|sentence)");
}

std::string_view to_string(Granularity g) {
    switch (g) {
        case Granularity::document: return "document";
        case Granularity::segment: return "segment";
        case Granularity::sentence: return "sentence";
    }
    return "document";
}

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> tokens;
    const std::u32string cps = text::decode_utf8(text);
    std::size_t i = 0;
    while (i < cps.size()) {
        while (i < cps.size() && text::is_space(cps[i])) ++i;
        std::size_t j = i;
        while (j < cps.size() && !text::is_space(cps[j])) ++j;
        std::size_t b = i;
        std::size_t e = j;
        while (b < e && text::is_punct(cps[b])) ++b;
        while (e > b && text::is_punct(cps[e - 1])) --e;
        if (b < e) {
            std::string tok;
            for (std::size_t k = b; k < e; ++k) text::append_utf8(tok, text::to_lower(cps[k]));
            tokens.push_back(std::move(tok));
        }
        i = j;
    }
    return tokens;
}

namespace {

bool is_abbreviation_before(const std::u32string& cps, std::size_t period) {
    // Word immediately before the period, ignoring opening punctuation.
    std::size_t b = period;
    while (b > 0 && !text::is_space(cps[b - 1])) --b;
    while (b < period && text::is_punct(cps[b])) ++b;
    if (period - b != 1) return false;
    const char32_t c = cps[b];
    if (!text::is_letter(c)) return false;
    if (text::is_upper(c)) return true;
    switch (c) {
        case U'c': case U'f': case U'n': case U'p': case U's': case U'v':
            return true;
        default:
            return false;
    }
}

std::string trimmed(const std::u32string& cps, std::size_t b, std::size_t e) {
    while (b < e && text::is_space(cps[b])) ++b;
    while (e > b && text::is_space(cps[e - 1])) --e;
    return text::encode_utf8(std::u32string_view(cps).substr(b, e - b));
}

}  // namespace

std::vector<std::string> split_sentences(std::string_view doc_text) {
    std::vector<std::string> sentences;
    const std::u32string cps = text::decode_utf8(doc_text);
    std::size_t start = 0;
    for (std::size_t i = 0; i < cps.size(); ++i) {
        const char32_t c = cps[i];
        if (c != U'.' && c != U'!' && c != U'?') continue;
        if (i + 1 >= cps.size() || !text::is_space(cps[i + 1])) continue;
        std::size_t j = i + 1;
        while (j < cps.size() && text::is_space(cps[j])) ++j;
        if (j >= cps.size()) continue;
        if (!text::is_upper(cps[j]) && !text::is_digit(cps[j])) continue;
        if (c == U'.' && is_abbreviation_before(cps, i)) continue;
        auto s = trimmed(cps, start, i + 1);
        if (!s.empty()) sentences.push_back(std::move(s));
        start = j;
        i = j - 1;
    }
    auto tail = trimmed(cps, start, cps.size());
    if (!tail.empty()) sentences.push_back(std::move(tail));
    return sentences;
}

std::vector<Segment> segment(std::string_view doc_id, std::size_t num_tokens, std::size_t window,
                             std::size_t stride) {
    if (window == 0 || stride == 0) throw Error("segment: window and stride must be positive");
    if (stride > window) throw Error("segment: stride must not exceed window");
    std::vector<Segment> out;
    for (std::size_t start = 0, pos = 1; start < num_tokens; start += stride, ++pos) {
        const std::size_t end = std::min(start + window, num_tokens);
        out.push_back(Segment{std::string(doc_id), pos, Span{start, end}});
        if (end == num_tokens) break;
    }
    return out;
}

std::vector<Segment> sentence_parts(const Document& doc) {
    std::vector<Segment> out;
    out.reserve(doc.sentence_spans.size());
    std::size_t pos = 1;
    for (const auto& span : doc.sentence_spans) out.push_back(Segment{doc.id, pos++, span});
    return out;
}

std::vector<Segment> parts_of(const Document& doc, Granularity granularity, std::size_t window,
                              std::size_t stride) {
    switch (granularity) {
        case Granularity::segment:
            return segment(doc.id, doc.tokens.size(), window, stride);
        case Granularity::sentence:
            return sentence_parts(doc);
        case Granularity::document:
            break;
    }
    if (doc.tokens.empty()) return {};
    return {Segment{doc.id, 1, Span{0, doc.tokens.size()}}};
}

Document make_document(std::string id, std::string_view text) {
    Document doc;
    doc.id = std::move(id);
    for (const auto& sentence : split_sentences(text)) {
        auto toks = tokenize(sentence);
        if (toks.empty()) continue;
        const std::size_t start = doc.tokens.size();
        std::move(toks.begin(), toks.end(), std::back_inserter(doc.tokens));
        doc.sentence_spans.push_back(Span{start, doc.tokens.size()});
    }
    return doc;
}

CollectionStats::CollectionStats(std::size_t num_docs, std::unordered_map<Token, std::size_t> df)
    : num_docs_(num_docs), df_(std::move(df)) {}

std::size_t CollectionStats::df(const Token& t) const {
    const auto it = df_.find(t);
    return it == df_.end() ? 0 : it->second;
}

CollectionStats collection_stats(const std::vector<Document>& docs) {
    if (docs.empty()) throw Error("empty collection");
    std::unordered_map<Token, std::size_t> df;
    for (const auto& doc : docs) {
        std::unordered_set<std::string_view> seen;
        for (const auto& t : doc.tokens) {
            if (seen.insert(t).second) ++df[t];
        }
    }
    return CollectionStats(docs.size(), std::move(df));
}

double idf(const Token& t, const CollectionStats& stats) {
    const auto n = static_cast<double>(stats.num_docs());
    if (n <= 0) return 0.0;
    const std::size_t df = stats.df(t);
    if (df == 0) return std::log(n);
    return std::log(n / static_cast<double>(df));
}

double TermCounts::probability(const Token& t) const {
    if (total_tokens == 0) return 0.0;
    const auto it = cf.find(t);
    if (it == cf.end()) return 0.0;
    return static_cast<double>(it->second) / static_cast<double>(total_tokens);
}

TermCounts collection_term_counts(const std::vector<Document>& docs) {
    TermCounts counts;
    for (const auto& doc : docs) {
        for (const auto& t : doc.tokens) ++counts.cf[t];
        counts.total_tokens += doc.tokens.size();
    }
    return counts;
}

std::vector<TextRecord> read_text_records(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    std::vector<TextRecord> records;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (text::trim(line).empty()) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0) {
            throw ParseError(path.string() + ": line " + std::to_string(lineno) +
                             ": expected <id>\\t<text>");
        }
        records.push_back(TextRecord{line.substr(0, tab), line.substr(tab + 1)});
    }
    return records;
}

std::vector<Document> read_collection(const std::filesystem::path& path) {
    std::vector<Document> docs;
    std::unordered_set<std::string> ids;
    for (auto& rec : read_text_records(path)) {
        if (!ids.insert(rec.id).second) {
            throw ParseError(path.string() + ": duplicate document id '" + rec.id + "'");
        }
        docs.push_back(make_document(std::move(rec.id), rec.text));
    }
    return docs;
}

double PartCounts::factor() const {
    return documents == 0 ? 0.0 : static_cast<double>(parts) / static_cast<double>(documents);
}

PartCounts count_parts(const std::vector<Document>& docs, Granularity granularity, std::size_t window,
                       std::size_t stride) {
    PartCounts counts;
    counts.documents = docs.size();
    for (const auto& doc : docs) counts.parts += parts_of(doc, granularity, window, stride).size();
    return counts;
}

}  // namespace clir
