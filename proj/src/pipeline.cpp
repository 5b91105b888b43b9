// Copyright 2026 The clirbench Authors
// SPDX-License-Identifier: Apache-2.0

#include "clir/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <iomanip>
#include <set>
#include <sstream>

#include <json.hpp>

#include "clir/error.hpp"
#include "clir/evaluation.hpp"
#include "clir/finetune.hpp"
#include "clir/projection.hpp"
#include "clir/text.hpp"

namespace clir::pipeline {

Encoding parse_encoding(std::string_view name) {
    const std::string n = text::to_lower(name);
    if (n == "iso") return Encoding::iso;
    if (n == "aoc") return Encoding::aoc;
    if (n == "semb") return Encoding::semb;
    if (n == "static") return Encoding::static_embeddings;
    throw Error("unknown encoding '" + std::string(name) + "' (expected ISO|AOC|SEMB|STATIC)");
}

namespace {

std::string_view encoding_name(Encoding e) {
    switch (e) {
        case Encoding::iso: return "ISO";
        case Encoding::aoc: return "AOC";
        case Encoding::semb: return "SEMB";
        case Encoding::static_embeddings: return "STATIC";
    }
    return "STATIC";
}

void require_file(const fs::path& path, const char* what) {
    if (path.empty()) throw Error(std::string("missing required input: ") + what);
    if (!fs::exists(path)) throw Error(std::string(what) + " not found: " + path.string());
}

std::string fmt6(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

}  // namespace

void ExperimentConfig::validate(bool needs_queries, bool needs_embeddings) const {
    if (k == 0) throw Error("k must be >= 1");
    if (window == 0) throw Error("window must be >= 1");
    if (stride == 0 || stride > window) throw Error("stride must be in [1, window]");
    if (tau == 0) throw Error("tau must be >= 1");
    if (max_seq_len != 64 && max_seq_len != 128 && max_seq_len != 256) {
        throw Error("max-seq-len must be one of 64, 128, 256");
    }
    if (!(temperature > 0.0)) throw Error("lambda must be positive");
    if (!(mu > 0.0)) throw Error("mu must be positive");
    if (vocab_limit && *vocab_limit == 0) throw Error("vocab-limit must be positive");
    require_file(docs, "document collection");
    if (needs_queries) require_file(queries, "query file");
    if (!needs_embeddings) return;
    if (query_vectors) {
        require_file(*query_vectors, "query vector container");
    } else if (needs_queries) {
        require_file(query_store, "query embedding store");
    }
    if (doc_vectors) {
        require_file(*doc_vectors, "document vector container");
    } else {
        require_file(doc_store, "document embedding store");
    }
    if (projection) require_file(*projection, "projection matrix");
    if (encoding == Encoding::semb && !doc_vectors) {
        throw Error("SEMB encoding needs --doc-vectors (term-state container from the exporter)");
    }
}

std::string ExperimentConfig::describe() const {
    std::ostringstream os;
    os << "seed=" << seed << " encoding=" << encoding_name(encoding) << " granularity=" << to_string(granularity)
       << " k=" << k << " window=" << window << " stride=" << stride << " tau=" << tau << " layer=" << layer
       << " max_seq_len=" << max_seq_len << " lambda=" << temperature << " mu=" << mu
       << " vocab_limit=" << (vocab_limit ? std::to_string(*vocab_limit) : "none");
    return os.str();
}

fs::path resolve_output(const fs::path& path) {
    if (path.is_relative()) {
        if (const char* dir = std::getenv("CLIR_OUTPUT_DIR"); dir != nullptr && *dir != '\0') return fs::path(dir) / path;
    }
    return path;
}

OutputFile::OutputFile(fs::path path) : final_(resolve_output(path)) {
    if (final_.empty()) throw Error("missing output path");
    if (final_.has_parent_path()) fs::create_directories(final_.parent_path());
    temp_ = final_;
    temp_ += ".tmp";
}

OutputFile::~OutputFile() {
    if (committed_) return;
    out_.reset();
    std::error_code ec;
    fs::remove(temp_, ec);
}

std::ostream& OutputFile::stream() {
    if (!out_) {
        out_ = std::make_unique<std::ofstream>(temp_, std::ios::trunc | std::ios::binary);
        if (!*out_) throw Error("cannot write " + temp_.string());
    }
    return *out_;
}

void OutputFile::commit() {
    if (out_) {
        out_->flush();
        if (!*out_) throw Error("write failed: " + final_.string());
        out_.reset();
    }
    if (!fs::exists(temp_)) throw Error("nothing written for " + final_.string());
    fs::rename(temp_, final_);
    committed_ = true;
}

std::map<std::string, TextRepresentation> load_text_vectors(const fs::path& path, const CollectionStats* idf_stats) {
    const EmbeddingStore store = load_embeddings(path);
    struct TermStates {
        std::map<std::size_t, std::pair<Token, Vector>> terms;
        SubwordGroup start;
        SubwordGroup end;
    };
    std::map<std::string, TextRepresentation> out;
    std::map<std::string, TermStates> states;
    for (std::size_t i = 0; i < store.size(); ++i) {
        const std::string& key = store.vocab()[i];
        const auto sep = key.find(kTermSeparator);
        if (sep == std::string::npos) {
            Vector v = to_vector(store.row(i));
            const bool zero = std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
            out[key] = TextRepresentation{key, std::move(v), zero};
            continue;
        }
        const std::string text_key = key.substr(0, sep);
        const std::string suffix = key.substr(sep + 1);
        auto& st = states[text_key];
        if (suffix == "start") {
            st.start.vectors = {to_vector(store.row(i))};
        } else if (suffix == "end") {
            st.end.vectors = {to_vector(store.row(i))};
        } else {
            const auto sep2 = suffix.find(kTermSeparator);
            std::size_t index = 0;
            const auto [ptr, ec] = std::from_chars(suffix.data(), suffix.data() + sep2, index);
            if (sep2 == std::string::npos || ec != std::errc() || ptr != suffix.data() + sep2) {
                throw ParseError(path.string() + ": malformed term-state key for '" + text_key + "'");
            }
            st.terms[index] = {suffix.substr(sep2 + 1), to_vector(store.row(i))};
        }
    }
    for (auto& [key, st] : states) {
        if (out.count(key) != 0) throw ParseError(path.string() + ": '" + key + "' has both pooled and term-state vectors");
        if (st.terms.empty()) {
            out[key] = TextRepresentation{key, Vector(store.dim(), 0.0), true};
            continue;
        }
        std::vector<SubwordGroup> groups;
        std::vector<double> weights;
        for (auto& [idx, tv] : st.terms) {
            weights.push_back(idf_stats != nullptr ? idf(tv.first, *idf_stats) : 1.0);
            groups.push_back(SubwordGroup{{std::move(tv.second)}});
        }
        out[key] = TextRepresentation{key, semb_embed(groups, weights, {st.start, st.end}), false};
    }
    return out;
}

namespace {

struct QuerySet {
    std::vector<TextRecord> records;
    std::vector<TextRepresentation> reps;
};

QuerySet build_queries(const ExperimentConfig& config, std::ostream* report) {
    QuerySet qs;
    qs.records = read_text_records(config.queries);
    if (config.query_vectors) {
        const auto vecs = load_text_vectors(*config.query_vectors, nullptr);
        for (const auto& rec : qs.records) {
            const auto it = vecs.find(rec.id);
            if (it == vecs.end()) throw Error("query '" + rec.id + "' missing from " + config.query_vectors->string());
            qs.reps.push_back(it->second);
        }
    } else {
        EmbeddingStore store = load_embeddings(config.query_store, config.vocab_limit);
        if (config.projection) store = project(store, ProjectionMatrix{read_matrix(*config.projection), false});
        for (const auto& rec : qs.records) qs.reps.push_back(embed_query(rec.id, tokenize(rec.text), store));
    }
    if (report != nullptr) {
        std::size_t empty = 0;
        for (const auto& r : qs.reps) empty += r.empty ? 1 : 0;
        if (empty > 0) *report << "warning: " << empty << " queries have no in-vocabulary term\n";
    }
    return qs;
}

struct DocSide {
    std::vector<TextRepresentation> docs;  // document granularity
    PartsIndex parts;                      // segment / sentence granularity
};

std::pair<std::string, std::size_t> split_part_key(const std::string& key) {
    const auto sep = key.find(kPartSeparator);
    if (sep == std::string::npos) return {key, 0};
    std::size_t pos = 0;
    const auto [ptr, ec] = std::from_chars(key.data() + sep + 1, key.data() + key.size(), pos);
    if (ec != std::errc() || ptr != key.data() + key.size() || pos == 0) {
        throw ParseError("malformed part key for document '" + key.substr(0, sep) + "'");
    }
    return {key.substr(0, sep), pos};
}

DocSide build_docs(const ExperimentConfig& config, const std::vector<Document>& docs, const CollectionStats& stats) {
    DocSide side;
    side.parts.granularity = config.granularity;
    if (config.doc_vectors) {
        const auto vecs = load_text_vectors(*config.doc_vectors, &stats);
        const std::size_t dim = vecs.empty() ? 0 : vecs.begin()->second.vector.size();
        if (config.granularity == Granularity::document) {
            for (const auto& doc : docs) {
                const auto it = vecs.find(doc.id);
                side.docs.push_back(it != vecs.end() ? it->second : TextRepresentation{doc.id, Vector(dim, 0.0), true});
            }
            return side;
        }
        std::map<std::string, std::vector<std::pair<std::size_t, const TextRepresentation*>>> grouped;
        for (const auto& [key, rep] : vecs) {
            auto [doc_id, pos] = split_part_key(key);
            if (pos == 0) continue;
            grouped[doc_id].emplace_back(pos, &rep);
        }
        for (const auto& doc : docs) {
            DocParts entry{doc.id, {}, {}};
            auto it = grouped.find(doc.id);
            if (it != grouped.end()) {
                std::sort(it->second.begin(), it->second.end(),
                          [](const auto& a, const auto& b) { return a.first < b.first; });
                for (const auto& [pos, rep] : it->second) {
                    entry.parts.push_back(*rep);
                    entry.positions.push_back(pos);
                }
            }
            side.parts.docs.push_back(std::move(entry));
        }
        return side;
    }
    const EmbeddingStore store = load_embeddings(config.doc_store, config.vocab_limit);
    if (config.granularity == Granularity::document) {
        for (const auto& doc : docs) side.docs.push_back(embed_document(doc.id, doc.tokens, store, stats));
    } else {
        side.parts = build_parts_index(docs, store, stats, config.granularity, config.window, config.stride);
    }
    return side;
}

std::size_t side_dim(const DocSide& side) {
    for (const auto& d : side.docs) return d.vector.size();
    for (const auto& d : side.parts.docs)
        for (const auto& p : d.parts) return p.vector.size();
    return 0;
}

void check_dims(const QuerySet& qs, const DocSide& side) {
    const std::size_t dd = side_dim(side);
    for (const auto& q : qs.reps) {
        if (dd != 0 && q.vector.size() != dd) {
            throw DimensionError("query vectors have dimension " + std::to_string(q.vector.size()) +
                                 " but document vectors have " + std::to_string(dd));
        }
    }
}

}  // namespace

std::vector<Ranking> rank_queries(const ExperimentConfig& config, std::ostream* report) {
    config.validate(true, true);
    const auto docs = read_collection(config.docs);
    const auto stats = collection_stats(docs);
    const QuerySet qs = build_queries(config, report);
    const DocSide side = build_docs(config, docs, stats);
    check_dims(qs, side);

    std::vector<Ranking> runs;
    runs.reserve(qs.reps.size());
    std::set<std::string> partless;
    for (const auto& q : qs.reps) {
        if (config.granularity == Granularity::document) {
            runs.push_back(rank(q, side.docs));
        } else {
            auto loc = rank_localized(q, side.parts, config.k);
            partless.insert(loc.docs_without_parts.begin(), loc.docs_without_parts.end());
            runs.push_back(std::move(loc.ranking));
        }
    }
    if (report != nullptr && !partless.empty()) {
        *report << "warning: " << partless.size() << " documents have no parts and were scored -1\n";
    }
    return runs;
}

void run_rank(const RankOptions& opt, std::ostream& report) {
    std::vector<Ranking> runs;
    report << "# clir rank model=" << opt.model << ' ' << opt.config.describe() << '\n';
    if (opt.model == "qlm") {
        opt.config.validate(true, false);
        const auto docs = read_collection(opt.config.docs);
        const auto counts = collection_term_counts(docs);
        for (const auto& rec : read_text_records(opt.config.queries)) {
            runs.push_back(rank_qlm(rec.id, tokenize(rec.text), docs, counts, opt.config.mu));
        }
    } else if (opt.model == "embedding") {
        runs = rank_queries(opt.config, &report);
    } else {
        throw Error("unknown model '" + opt.model + "' (expected embedding|qlm)");
    }
    OutputFile out(opt.out);
    write_run(out.stream(), runs, opt.tag, opt.depth);
    out.commit();
    report << "queries=" << runs.size() << " depth=" << opt.depth << " run=" << out.path().string() << '\n';
}

void run_align(const AlignOptions& opt, std::ostream& report) {
    require_file(opt.dict, "dictionary file");
    require_file(opt.src, "source embedding store");
    require_file(opt.tgt, "target embedding store");
    const auto dict = read_dictionary(opt.dict);
    const auto src = load_embeddings(opt.src, opt.vocab_limit);
    const auto tgt = load_embeddings(opt.tgt, opt.vocab_limit);
    if (src.dim() != tgt.dim()) {
        throw DimensionError("source dimension " + std::to_string(src.dim()) + " differs from target dimension " +
                             std::to_string(tgt.dim()));
    }

    report << "# clir align seed=" << opt.seed << " method=" << opt.method << " src=" << opt.src.string()
           << " tgt=" << opt.tgt.string() << " dict=" << opt.dict.string() << '\n';
    ProjectionMatrix w;
    if (opt.method == "procrustes") {
        auto filtered = filter_dictionary(dict, src, tgt);
        if (filtered.usable.empty()) throw Error("no trainable pairs in " + opt.dict.string());
        const auto [xs, xt] = assemble_matrices(filtered.usable, src, tgt);
        w = procrustes(xs, xt);
        report << "pairs_used=" << filtered.usable.size() << " pairs_excluded=" << filtered.excluded.size() << '\n';
        report << "residual=" << fmt6(procrustes_residual(xs, xt, w.w)) << '\n';
    } else if (opt.method == "proc-b") {
        const auto result = proc_b(src, tgt, dict, opt.iterations, NeighbourSearch{opt.nn_limit, true});
        w = result.projection;
        report << "pairs_excluded=" << result.excluded_seed_pairs.size() << '\n';
        for (std::size_t r = 0; r < result.residuals.size(); ++r) {
            report << "round=" << (r + 1) << " pairs=" << result.dictionary_sizes[r]
                   << " residual=" << fmt6(result.residuals[r]) << '\n';
        }
    } else {
        throw Error("unknown align method '" + opt.method + "' (expected procrustes|proc-b)");
    }
    if (w.rank_deficient) {
        report << "warning: cross-covariance is rank deficient; solution fixed by deterministic basis completion\n";
    }
    report << "orthogonality_error=" << std::scientific << std::setprecision(3) << orthogonality_error(w.w)
           << std::defaultfloat << '\n';

    OutputFile out(opt.out);
    write_matrix(w.w, out.temp_path());
    std::optional<OutputFile> projected;
    if (opt.projected_out) {
        projected.emplace(*opt.projected_out);
        write_embeddings_binary(project(src, w), projected->temp_path());
    }
    out.commit();
    if (projected) projected->commit();
    report << "projection=" << out.path().string() << '\n';
}

void run_rerank(const RerankOptions& opt, std::ostream& report) {
    require_file(opt.run, "base run file");
    require_file(opt.scores, "external score file");
    const auto base = read_run(opt.run);
    const auto scores = read_external_scores(opt.scores);
    std::vector<Ranking> merged;
    merged.reserve(base.size());
    static const std::unordered_map<std::string, double> none;
    for (const auto& r : base) {
        const auto it = scores.find(r.query_id);
        merged.push_back(rerank_merge(r, it == scores.end() ? none : it->second, opt.top_n));
    }
    OutputFile out(opt.out);
    write_run(out.stream(), merged, opt.tag);
    out.commit();
    report << "# clir rerank top_n=" << opt.top_n << " queries=" << merged.size() << " run=" << out.path().string()
           << '\n';
}

void run_eval(const EvalOptions& opt, std::ostream& report) {
    require_file(opt.qrels, "qrels file");
    if (opt.runs.empty()) throw Error("eval: at least one run file required");
    const Qrels qrels = parse_qrels(opt.qrels);
    for (const auto& w : qrels.warnings) report << "warning: " << w << '\n';

    std::vector<MapResult> results;
    for (const auto& path : opt.runs) {
        require_file(path, "run file");
        results.push_back(mean_average_precision(read_run(path), qrels));
    }
    auto query_set = [](const MapResult& r) {
        std::set<std::string> s;
        for (const auto& [q, ap] : r.per_query) s.insert(q);
        return s;
    };
    const auto base_set = query_set(results.front());
    for (std::size_t i = 1; i < results.size(); ++i) {
        const auto other = query_set(results[i]);
        if (other == base_set) continue;
        std::vector<std::string> diff;
        std::set_symmetric_difference(base_set.begin(), base_set.end(), other.begin(), other.end(),
                                      std::back_inserter(diff));
        std::string msg = "evaluated query sets differ between " + opt.runs.front().string() + " and " +
                          opt.runs[i].string() + "; symmetric difference:";
        for (const auto& q : diff) msg += " " + q;
        throw Error(msg);
    }

    std::vector<std::optional<SignificanceReport>> tests(results.size());
    auto aps = [](const MapResult& r) {
        std::vector<double> v;
        for (const auto& [q, ap] : r.per_query) v.push_back(ap);
        return v;
    };
    for (std::size_t i = 1; i < results.size(); ++i) {
        if (results[i].per_query.size() >= 2) {
            tests[i] = paired_ttest(aps(results[i]), aps(results.front()), opt.bonferroni_m, opt.alpha);
        }
    }

    std::ostringstream table;
    table << "# clir eval seed=" << opt.seed << " alpha=" << opt.alpha << " bonferroni_m=" << opt.bonferroni_m
          << " baseline=" << opt.runs.front().filename().string() << '\n';
    table << std::left << std::setw(16) << "query";
    for (const auto& p : opt.runs) table << ' ' << std::setw(14) << p.filename().string();
    table << '\n';
    for (std::size_t q = 0; q < results.front().per_query.size(); ++q) {
        table << std::setw(16) << results.front().per_query[q].first;
        for (const auto& r : results) table << ' ' << std::setw(14) << fmt6(r.per_query[q].second);
        table << '\n';
    }
    table << std::setw(16) << "MAP";
    for (const auto& r : results) table << ' ' << std::setw(14) << fmt6(r.map);
    table << '\n';
    for (std::size_t i = 1; i < results.size(); ++i) {
        table << "vs_baseline " << opt.runs[i].filename().string();
        if (tests[i]) {
            table << " t=" << fmt6(tests[i]->t_statistic) << " p=" << fmt6(tests[i]->p_value)
                  << " alpha/m=" << fmt6(tests[i]->corrected_alpha)
                  << " significant=" << (tests[i]->significant ? "yes" : "no")
                  << (tests[i]->degenerate ? " (zero variance)" : "") << '\n';
        } else {
            table << " (fewer than two queries; no test)\n";
        }
    }

    std::optional<OutputFile> table_file;
    std::optional<OutputFile> records_file;
    if (opt.report_out) {
        table_file.emplace(*opt.report_out);
        table_file->stream() << table.str();
    }
    if (opt.records_out) {
        records_file.emplace(*opt.records_out);
        auto& os = records_file->stream();
        for (std::size_t i = 0; i < results.size(); ++i) {
            const std::string run = opt.runs[i].filename().string();
            for (const auto& [q, ap] : results[i].per_query) {
                os << nlohmann::json{{"run", run}, {"query_id", q}, {"ap", ap}}.dump() << '\n';
            }
            nlohmann::json footer{{"run", run}, {"map", results[i].map}, {"seed", opt.seed}};
            if (tests[i]) {
                footer["t"] = tests[i]->t_statistic;
                footer["p"] = tests[i]->p_value;
                footer["significant"] = tests[i]->significant;
                footer["bonferroni_m"] = tests[i]->num_comparisons;
            } else {
                footer["t"] = nullptr;
                footer["p"] = nullptr;
                footer["significant"] = nullptr;
            }
            os << footer.dump() << '\n';
        }
    }
    if (table_file) table_file->commit();
    if (records_file) records_file->commit();
    report << table.str();
}

namespace {

std::vector<std::pair<std::string, std::string>> read_training_pairs(const fs::path& path) {
    std::vector<std::pair<std::string, std::string>> pairs;
    for (auto& rec : read_text_records(path)) {
        const auto doc = std::string(text::trim(rec.text));
        if (doc.empty() || doc.find('\t') != std::string::npos) {
            throw ParseError(path.string() + ": expected <query_id>\\t<doc_id>");
        }
        pairs.emplace_back(std::move(rec.id), doc);
    }
    return pairs;
}

}  // namespace

void run_finetune(const FinetuneOptions& opt, std::ostream& report) {
    const ExperimentConfig& config = opt.config;
    config.validate(true, true);
    if (config.granularity != Granularity::document) throw Error("finetune ranks at document granularity");
    require_file(opt.train_pairs, "training pairs file");

    const auto docs = read_collection(config.docs);
    const auto stats = collection_stats(docs);
    const QuerySet qs = build_queries(config, &report);
    const DocSide side = build_docs(config, docs, stats);
    check_dims(qs, side);

    std::map<std::string, std::size_t> query_index;
    std::vector<std::string> query_ids;
    for (std::size_t i = 0; i < qs.reps.size(); ++i) {
        query_index[qs.reps[i].id] = i;
        query_ids.push_back(qs.reps[i].id);
    }
    std::map<std::string, std::size_t> doc_index;
    for (std::size_t i = 0; i < side.docs.size(); ++i) doc_index[side.docs[i].id] = i;

    const auto pairs = read_training_pairs(opt.train_pairs);
    const auto folds = kfold_split(query_ids, opt.folds, config.seed);

    report << "# clir finetune " << config.describe() << " folds=" << opt.folds << " batch=" << opt.batch
           << " epochs=" << opt.epochs << " lr=" << opt.learning_rate << '\n';

    std::vector<std::unique_ptr<OutputFile>> outputs;
    std::vector<Ranking> merged;
    for (std::size_t f = 0; f < opt.folds; ++f) {
        const auto eval_q = folds.fold(f);
        const auto train_q = folds.complement(f);
        assert_no_leakage(train_q, eval_q);
        const std::set<std::string> train_set(train_q.begin(), train_q.end());

        std::vector<TrainingPair> training;
        std::size_t skipped = 0;
        for (const auto& [qid, did] : pairs) {
            if (train_set.count(qid) == 0) continue;
            const auto qi = query_index.find(qid);
            const auto di = doc_index.find(did);
            if (qi == query_index.end() || di == doc_index.end() || qs.reps[qi->second].empty ||
                side.docs[di->second].empty) {
                ++skipped;
                continue;
            }
            training.push_back(TrainingPair{qs.reps[qi->second].vector, side.docs[di->second].vector, qid});
        }
        TrainOptions to;
        to.epochs = opt.epochs;
        to.batch_size = opt.batch;
        to.temperature = config.temperature;
        to.learning_rate = opt.learning_rate;
        to.seed = config.seed + f;
        AdapterMatrix adapter = AdapterMatrix::identity(side_dim(side));
        std::vector<double> losses;
        if (training.size() >= 2) {
            auto trained = train_adapter(training, to);
            adapter = std::move(trained.adapter);
            losses = std::move(trained.epoch_losses);
        }

        report << "fold=" << f << " train_queries=" << train_q.size() << " eval_queries=" << eval_q.size()
               << " train_pairs=" << training.size() << " skipped_pairs=" << skipped;
        if (!losses.empty()) report << " loss_first=" << fmt6(losses.front()) << " loss_last=" << fmt6(losses.back());
        report << '\n';

        auto& adapter_out = outputs.emplace_back(
            std::make_unique<OutputFile>(opt.out_dir / ("adapter_fold" + std::to_string(f) + ".emb")));
        write_matrix(adapter.a, adapter_out->temp_path());

        std::vector<TextRepresentation> adapted_docs;
        adapted_docs.reserve(side.docs.size());
        for (const auto& d : side.docs) {
            adapted_docs.push_back(d.empty ? d : TextRepresentation{d.id, adapter.apply(d.vector), false});
        }
        for (const auto& qid : eval_q) {
            const auto& q = qs.reps[query_index.at(qid)];
            const TextRepresentation aq = q.empty ? q : TextRepresentation{q.id, adapter.apply(q.vector), false};
            merged.push_back(rank(aq, adapted_docs));
        }
    }
    std::sort(merged.begin(), merged.end(), [](const Ranking& a, const Ranking& b) { return a.query_id < b.query_id; });
    auto& run_out = outputs.emplace_back(std::make_unique<OutputFile>(opt.out_dir / "finetuned.run"));
    write_run(run_out->stream(), merged, opt.tag, opt.depth);
    for (auto& o : outputs) o->commit();
    report << "run=" << run_out->path().string() << '\n';
}

void run_analyze_positions(const PositionsOptions& opt, std::ostream& report) {
    const ExperimentConfig& config = opt.config;
    config.validate(true, true);
    if (config.granularity == Granularity::document) throw Error("analyze positions needs segment or sentence granularity");
    const auto docs = read_collection(config.docs);
    const auto stats = collection_stats(docs);
    const QuerySet qs = build_queries(config, &report);
    const DocSide side = build_docs(config, docs, stats);
    check_dims(qs, side);

    std::vector<std::vector<Segment>> tops;
    for (const auto& q : qs.reps) tops.push_back(top_parts(q, side.parts, opt.top));
    const auto hist = position_histogram(tops);

    OutputFile out(opt.out);
    auto& os = out.stream();
    os << "# clir analyze positions " << config.describe() << " top=" << opt.top << '\n';
    os << "bin\tproportion\n";
    char buf[64];
    for (std::size_t b = 0; b < hist.size(); ++b) {
        std::snprintf(buf, sizeof buf, "%.10f", hist[b]);
        os << (b < 10 ? std::to_string(b + 1) : std::string(">10")) << '\t' << buf << '\n';
    }
    out.commit();
    report << "histogram=" << out.path().string() << " queries=" << tops.size() << '\n';
}

void run_stats(const StatsOptions& opt, std::ostream& report) {
    require_file(opt.docs, "document collection");
    const auto docs = read_collection(opt.docs);
    const auto counts = count_parts(docs, opt.granularity, opt.window, opt.stride);
    std::ostringstream table;
    table << "# clir stats granularity=" << to_string(opt.granularity) << " window=" << opt.window
          << " stride=" << opt.stride << '\n';
    table << "documents\tparts\tfactor\n";
    table << counts.documents << '\t' << counts.parts << '\t' << fmt6(counts.factor()) << '\n';
    if (opt.out) {
        OutputFile out(*opt.out);
        out.stream() << table.str();
        out.commit();
    }
    report << table.str();
}

void run_convert(const ConvertOptions& opt, std::ostream& report) {
    require_file(opt.in, "input embedding file");
    const auto store = load_embeddings(opt.in, opt.limit);
    OutputFile out(opt.out);
    if (opt.to == "binary") {
        write_embeddings_binary(store, out.temp_path());
    } else if (opt.to == "text") {
        write_embeddings_text(store, out.temp_path());
    } else {
        throw Error("convert: --to must be text or binary");
    }
    out.commit();
    report << "entries=" << store.size() << " dim=" << store.dim() << " out=" << out.path().string() << '\n';
}

}  // namespace clir::pipeline
