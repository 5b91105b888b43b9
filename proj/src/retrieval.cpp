// Copyright 2026 The clirbench Authors
// SPDX-License-Identifier: Apache-2.0

#include "clir/retrieval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "clir/error.hpp"
#include "clir/kernels.hpp"
#include "clir/text.hpp"

namespace clir {

void sort_entries(std::vector<RankedDoc>& entries) {
    std::sort(entries.begin(), entries.end(), [](const RankedDoc& a, const RankedDoc& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.doc_id < b.doc_id;
    });
}

namespace {

bool all_zero(const Vector& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

/// Part/document score: -1 for an empty text, otherwise cosine.
double text_score(const TextRepresentation& query, const TextRepresentation& doc) {
    if (doc.vector.size() != query.vector.size()) {
        throw DimensionError("'" + doc.id + "' has dimension " + std::to_string(doc.vector.size()) +
                             ", query '" + query.id + "' has " + std::to_string(query.vector.size()));
    }
    if (doc.empty || all_zero(doc.vector)) return -1.0;
    return kernels::cosine(query.vector, doc.vector);
}

}  // namespace

TextRepresentation embed_query(std::string id, const std::vector<Token>& terms, const EmbeddingStore& store) {
    TextRepresentation rep{std::move(id), Vector(store.dim(), 0.0), true};
    for (const auto& t : terms) {
        const auto row = store.lookup(t);
        if (!row) continue;
        rep.empty = false;
        for (std::size_t k = 0; k < store.dim(); ++k) rep.vector[k] += (*row)[k];
    }
    return rep;
}

TextRepresentation embed_document(std::string id, std::span<const Token> terms, const EmbeddingStore& store,
                                  const CollectionStats& stats) {
    TextRepresentation rep{std::move(id), Vector(store.dim(), 0.0), true};
    for (const auto& t : terms) {
        const auto row = store.lookup(t);
        if (!row) continue;
        rep.empty = false;
        const double w = idf(t, stats);
        for (std::size_t k = 0; k < store.dim(); ++k) rep.vector[k] += w * (*row)[k];
    }
    return rep;
}

Ranking rank(const TextRepresentation& query, const std::vector<TextRepresentation>& docs, bool parallel) {
    const std::size_t dim = query.vector.size();
    std::vector<double> block;
    block.reserve(docs.size() * dim);
    for (const auto& d : docs) {
        if (d.vector.size() != dim) {
            throw DimensionError("rank: document '" + d.id + "' has dimension " + std::to_string(d.vector.size()) +
                                 ", query has " + std::to_string(dim));
        }
        if (d.empty) {
            block.insert(block.end(), dim, 0.0);
        } else {
            block.insert(block.end(), d.vector.begin(), d.vector.end());
        }
    }
    const kernels::RowView<double> rows{block, docs.size(), dim};
    const auto scores = parallel ? kernels::parallel::cosine_scores(query.vector, rows)
                                 : kernels::serial::cosine_scores(query.vector, rows);
    Ranking out{query.id, {}};
    out.entries.reserve(docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) out.entries.push_back(RankedDoc{docs[i].id, scores[i]});
    sort_entries(out.entries);
    return out;
}

double localized_score(const TextRepresentation& query, std::span<const TextRepresentation> parts, std::size_t k) {
    if (parts.empty()) throw Error("localized_score: document has no parts");
    if (k == 0) throw Error("localized_score: k must be positive");
    std::vector<double> scores;
    scores.reserve(parts.size());
    for (const auto& p : parts) scores.push_back(text_score(query, p));
    const std::size_t take = std::min(k, scores.size());
    std::partial_sort(scores.begin(), scores.begin() + static_cast<std::ptrdiff_t>(take), scores.end(),
                      std::greater<>());
    double sum = 0.0;
    for (std::size_t i = 0; i < take; ++i) sum += scores[i];
    return sum / static_cast<double>(take);
}

PartsIndex build_parts_index(const std::vector<Document>& docs, const EmbeddingStore& store,
                             const CollectionStats& stats, Granularity granularity, std::size_t window,
                             std::size_t stride) {
    PartsIndex index;
    index.granularity = granularity;
    index.docs.resize(docs.size());
    const auto n = static_cast<std::int64_t>(docs.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < n; ++i) {
        const Document& doc = docs[i];
        DocParts& entry = index.docs[i];
        entry.doc_id = doc.id;
        for (const auto& seg : parts_of(doc, granularity, window, stride)) {
            const std::span<const Token> toks(doc.tokens.data() + seg.span.start, seg.span.size());
            entry.parts.push_back(embed_document(doc.id, toks, store, stats));
            entry.positions.push_back(seg.position);
        }
    }
    return index;
}

LocalizedRanking rank_localized(const TextRepresentation& query, const PartsIndex& index, std::size_t k,
                                bool parallel) {
    if (k == 0) throw Error("rank_localized: k must be positive");
    const auto n = static_cast<std::int64_t>(index.docs.size());
    std::vector<double> scores(index.docs.size(), -1.0);
    auto score_doc = [&](std::int64_t i) {
        const auto& parts = index.docs[i].parts;
        if (!parts.empty()) scores[i] = localized_score(query, parts, k);
    };
    if (parallel) {
#pragma omp parallel for schedule(dynamic, 16)
        for (std::int64_t i = 0; i < n; ++i) score_doc(i);
    } else {
        for (std::int64_t i = 0; i < n; ++i) score_doc(i);
    }
    LocalizedRanking out;
    out.ranking.query_id = query.id;
    out.ranking.entries.reserve(index.docs.size());
    for (std::size_t i = 0; i < index.docs.size(); ++i) {
        if (index.docs[i].parts.empty()) out.docs_without_parts.push_back(index.docs[i].doc_id);
        out.ranking.entries.push_back(RankedDoc{index.docs[i].doc_id, scores[i]});
    }
    sort_entries(out.ranking.entries);
    return out;
}

std::vector<Segment> top_parts(const TextRepresentation& query, const PartsIndex& index, std::size_t n) {
    struct Scored {
        double score;
        const std::string* doc_id;
        std::size_t position;
        std::size_t part;
    };
    std::vector<Scored> all;
    for (const auto& doc : index.docs) {
        for (std::size_t p = 0; p < doc.parts.size(); ++p) {
            all.push_back(Scored{text_score(query, doc.parts[p]), &doc.doc_id, doc.positions[p], p});
        }
    }
    const std::size_t take = std::min(n, all.size());
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(take), all.end(),
                      [](const Scored& a, const Scored& b) {
                          if (a.score != b.score) return a.score > b.score;
                          if (*a.doc_id != *b.doc_id) return *a.doc_id < *b.doc_id;
                          return a.position < b.position;
                      });
    std::vector<Segment> out;
    out.reserve(take);
    for (std::size_t i = 0; i < take; ++i) out.push_back(Segment{*all[i].doc_id, all[i].position, Span{}});
    return out;
}

Ranking rerank_merge(const Ranking& base, const std::unordered_map<std::string, double>& external_scores,
                     std::size_t top_n) {
    if (top_n == 0) throw Error("rerank_merge: top_n must be positive");
    if (external_scores.empty()) return base;
    const std::size_t window = std::min(top_n, base.entries.size());
    std::vector<RankedDoc> scored;
    std::vector<RankedDoc> unscored;
    for (std::size_t i = 0; i < window; ++i) {
        const auto& e = base.entries[i];
        const auto it = external_scores.find(e.doc_id);
        if (it != external_scores.end()) {
            scored.push_back(RankedDoc{e.doc_id, it->second});
        } else {
            unscored.push_back(e);
        }
    }
    sort_entries(scored);
    Ranking out{base.query_id, {}};
    out.entries.reserve(base.entries.size());
    const double floor = window < base.entries.size() ? base.entries[window].score : 0.0;
    std::size_t pos = 0;
    for (auto* group : {&scored, &unscored}) {
        for (const auto& e : *group) {
            out.entries.push_back(RankedDoc{e.doc_id, floor + static_cast<double>(window - pos)});
            ++pos;
        }
    }
    out.entries.insert(out.entries.end(), base.entries.begin() + static_cast<std::ptrdiff_t>(window),
                       base.entries.end());
    return out;
}

double qlm_dirichlet(const std::vector<Token>& query_terms, const Document& doc, const TermCounts& collection,
                     double mu) {
    if (!(mu > 0.0)) throw Error("qlm_dirichlet: mu must be positive");
    std::unordered_map<std::string_view, std::size_t> tf;
    for (const auto& t : doc.tokens) ++tf[t];
    const double len = static_cast<double>(doc.tokens.size());
    double score = 0.0;
    for (const auto& t : query_terms) {
        const double p = collection.probability(t);
        if (p == 0.0) continue;
        const auto it = tf.find(t);
        const double f = it == tf.end() ? 0.0 : static_cast<double>(it->second);
        score += std::log((f + mu * p) / (len + mu));
    }
    return score;
}

Ranking rank_qlm(const std::string& query_id, const std::vector<Token>& query_terms,
                 const std::vector<Document>& docs, const TermCounts& collection, double mu) {
    Ranking out{query_id, {}};
    out.entries.resize(docs.size());
    const auto n = static_cast<std::int64_t>(docs.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < n; ++i) {
        out.entries[i] = RankedDoc{docs[i].id, qlm_dirichlet(query_terms, docs[i], collection, mu)};
    }
    sort_entries(out.entries);
    return out;
}

void write_run(std::ostream& out, const std::vector<Ranking>& runs, const std::string& tag, std::size_t depth) {
    char buf[64];
    for (const auto& r : runs) {
        const std::size_t n = std::min(depth, r.entries.size());
        for (std::size_t i = 0; i < n; ++i) {
            std::snprintf(buf, sizeof buf, "%.6f", r.entries[i].score);
            out << r.query_id << " Q0 " << r.entries[i].doc_id << ' ' << (i + 1) << ' ' << buf << ' ' << tag << '\n';
        }
    }
}

void write_run(const std::filesystem::path& path, const std::vector<Ranking>& runs, const std::string& tag,
               std::size_t depth) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    write_run(out, runs, tag, depth);
    if (!out) throw Error("write failed: " + path.string());
}

namespace {

template <typename T>
bool parse_field(std::string_view s, T& out) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

std::vector<Ranking> read_run(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open run file " + path.string());
    std::vector<Ranking> runs;
    std::vector<std::vector<std::size_t>> ranks;
    std::unordered_map<std::string, std::size_t> slot;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto f = text::split_fields(text::trim(line));
        if (f.empty()) continue;
        std::size_t r = 0;
        double score = 0;
        if (f.size() != 6 || !parse_field(f[3], r) || !parse_field(f[4], score)) {
            throw ParseError(path.string() + ": line " + std::to_string(lineno) +
                             ": expected <qid> Q0 <docid> <rank> <score> <tag>");
        }
        const std::string qid(f[0]);
        auto [it, inserted] = slot.emplace(qid, runs.size());
        if (inserted) {
            runs.push_back(Ranking{qid, {}});
            ranks.emplace_back();
        }
        runs[it->second].entries.push_back(RankedDoc{std::string(f[2]), score});
        ranks[it->second].push_back(r);
    }
    for (std::size_t q = 0; q < runs.size(); ++q) {
        std::vector<std::size_t> order(runs[q].entries.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return ranks[q][a] < ranks[q][b];
        });
        std::vector<RankedDoc> sorted;
        sorted.reserve(order.size());
        for (auto i : order) sorted.push_back(std::move(runs[q].entries[i]));
        runs[q].entries = std::move(sorted);
    }
    return runs;
}

std::map<std::string, std::unordered_map<std::string, double>> read_external_scores(
    const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open score file " + path.string());
    std::map<std::string, std::unordered_map<std::string, double>> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto f = text::split_fields(text::trim(line));
        if (f.empty()) continue;
        double score = 0;
        std::string_view doc;
        if (f.size() == 3 && parse_field(f[2], score)) {
            doc = f[1];
        } else if (f.size() == 6 && parse_field(f[4], score)) {
            doc = f[2];
        } else {
            throw ParseError(path.string() + ": line " + std::to_string(lineno) + ": expected <qid> <docid> <score>");
        }
        out[std::string(f[0])][std::string(doc)] = score;
    }
    return out;
}

}  // namespace clir
