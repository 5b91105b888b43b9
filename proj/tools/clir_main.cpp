// Copyright 2026 The clirbench Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "clir/error.hpp"
#include "clir/pipeline.hpp"
#include "clir/text.hpp"

namespace cp = clir::pipeline;

namespace {

// Flags shared by rank, finetune and analyze positions.
struct ConfigFlags {
    std::string encoding = "STATIC";
    std::string granularity = "document";
    std::optional<std::string> projection;
    std::optional<std::string> query_vectors;
    std::optional<std::string> doc_vectors;
    std::size_t vocab_limit = 100000;
    cp::ExperimentConfig config;

    void attach(CLI::App* app) {
        app->add_option("--queries", config.queries, "queries file (<id>\\t<text>)");
        app->add_option("--docs", config.docs, "document collection (<id>\\t<text>)")->required();
        app->add_option("--query-emb", config.query_store, "query-language embedding store");
        app->add_option("--doc-emb", config.doc_store, "document-language embedding store");
        app->add_option("--projection", projection, "projection matrix applied to query embeddings");
        app->add_option("--query-vectors", query_vectors, "precomputed query vectors (exporter output)");
        app->add_option("--doc-vectors", doc_vectors, "precomputed document or part vectors (exporter output)");
        app->add_option("--encoding", encoding, "ISO|AOC|SEMB|STATIC")->capture_default_str();
        app->add_option("--granularity", granularity, "document|segment|sentence")->capture_default_str();
        app->add_option("--k", config.k, "pooling depth for localized matching")->capture_default_str();
        app->add_option("--window", config.window, "segment length in tokens")->capture_default_str();
        app->add_option("--stride", config.stride, "segment stride in tokens")->capture_default_str();
        app->add_option("--tau", config.tau, "context cap for AOC")->capture_default_str();
        app->add_option("--layer", config.layer, "encoder layer of the exported vectors")->capture_default_str();
        app->add_option("--max-seq-len", config.max_seq_len, "64|128|256")->capture_default_str();
        app->add_option("--lambda", config.temperature, "similarity scale for contrastive training")
            ->capture_default_str();
        app->add_option("--mu", config.mu, "Dirichlet smoothing mass")->capture_default_str();
        app->add_option("--vocab-limit", vocab_limit, "load at most this many embeddings (0 = all)")
            ->capture_default_str();
    }

    cp::ExperimentConfig resolve(std::uint64_t seed) {
        cp::ExperimentConfig c = config;
        c.encoding = cp::parse_encoding(encoding);
        c.granularity = clir::parse_granularity(granularity);
        c.seed = seed;
        c.vocab_limit = vocab_limit == 0 ? std::nullopt : std::optional<std::size_t>(vocab_limit);
        if (projection) c.projection = *projection;
        if (query_vectors) c.query_vectors = *query_vectors;
        if (doc_vectors) c.doc_vectors = *doc_vectors;
        return c;
    }
};

bool given(const std::vector<std::string>& args, const std::string& flag) {
    return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
        return a == flag || a.rfind(flag + "=", 0) == 0;
    });
}

// Removes --config <file> and splices its key=value lines in as flags right
// after the subcommand path. Keys already given on the command line are
// skipped, so flags override the file.
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::optional<std::string> path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    }
    if (!path) return args;

    std::ifstream in(*path);
    if (!in) throw clir::Error("cannot open config file " + *path);
    std::vector<std::string> extra;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = clir::text::trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string_view::npos) {
            throw clir::ParseError(*path + ": line " + std::to_string(line_no) + ": expected key=value");
        }
        std::string key(clir::text::trim(t.substr(0, eq)));
        while (!key.empty() && key.front() == '-') key.erase(0, 1);
        const std::string flag = "--" + key;
        if (!given(args, flag)) extra.push_back(flag + "=" + std::string(clir::text::trim(t.substr(eq + 1))));
    }

    static const std::vector<std::string> commands{"align", "rank", "rerank", "eval", "finetune", "analyze", "stats",
                                                   "convert"};
    auto at = std::find_if(args.begin(), args.end(), [](const std::string& a) {
        return std::find(commands.begin(), commands.end(), a) != commands.end();
    });
    if (at == args.end()) return args;
    ++at;
    if (at != args.end() && *(at - 1) == "analyze" && *at == "positions") ++at;
    args.insert(at, extra.begin(), extra.end());
    return args;
}

std::optional<std::size_t> positive_or_none(std::size_t v) {
    return v == 0 ? std::nullopt : std::optional<std::size_t>(v);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cross-lingual retrieval workbench", "clir"};
    std::string config_file;
    app.add_option("--config", config_file, "key=value configuration file; flags override it");
    app.require_subcommand(1);
    app.fallthrough();
    std::uint64_t seed = 42;
    app.add_option("--seed", seed, "seed for every random step")->capture_default_str();

    cp::AlignOptions align;
    std::string align_out, align_projected;
    std::size_t align_vocab = 0, align_nn = 0;
    auto* a = app.add_subcommand("align", "learn an orthogonal projection between embedding spaces");
    a->add_option("--method", align.method, "procrustes|proc-b")->capture_default_str();
    a->add_option("--dict", align.dict, "seed dictionary (<src>\\t<tgt>)")->required();
    a->add_option("--src", align.src, "source embedding store")->required();
    a->add_option("--tgt", align.tgt, "target embedding store")->required();
    a->add_option("--iterations", align.iterations, "Proc-B rounds")->capture_default_str();
    a->add_option("--vocab-limit", align_vocab, "load at most this many embeddings (0 = all)");
    a->add_option("--nn-limit", align_nn, "restrict mutual neighbours to the first N terms (0 = all)");
    a->add_option("--out", align_out, "projection matrix output")->required();
    a->add_option("--projected-out", align_projected, "also write the projected source store");

    cp::RankOptions rank;
    ConfigFlags rank_flags;
    std::string rank_out;
    auto* r = app.add_subcommand("rank", "rank documents for every query");
    rank_flags.attach(r);
    r->add_option("--model", rank.model, "embedding|qlm")->capture_default_str();
    r->add_option("--depth", rank.depth, "entries per query in the run file")->capture_default_str();
    r->add_option("--tag", rank.tag, "run tag")->capture_default_str();
    r->add_option("--out", rank_out, "run file output")->required();

    cp::RerankOptions rerank;
    std::string rerank_out;
    auto* rr = app.add_subcommand("rerank", "re-rank the head of a run with external scores");
    rr->add_option("--run", rerank.run, "base run file")->required();
    rr->add_option("--scores", rerank.scores, "external scores (<qid> <docid> <score>)")->required();
    rr->add_option("--top", rerank.top_n, "window size")->capture_default_str();
    rr->add_option("--tag", rerank.tag, "run tag")->capture_default_str();
    rr->add_option("--out", rerank_out, "run file output")->required();

    cp::EvalOptions eval;
    std::string eval_report, eval_records;
    auto* e = app.add_subcommand("eval", "MAP per run plus paired significance against the first run");
    e->add_option("--qrels", eval.qrels, "relevance judgments")->required();
    e->add_option("runs", eval.runs, "run files; the first is the baseline")->required();
    e->add_option("--bonferroni-m", eval.bonferroni_m, "number of comparisons")->capture_default_str();
    e->add_option("--alpha", eval.alpha, "family-wise significance level")->capture_default_str();
    e->add_option("--report", eval_report, "write the text table here");
    e->add_option("--records", eval_records, "write JSON lines here");

    cp::FinetuneOptions ft;
    ConfigFlags ft_flags;
    auto* f = app.add_subcommand("finetune", "k-fold contrastive adapter training");
    ft_flags.attach(f);
    f->add_option("--train-pairs", ft.train_pairs, "training pairs (<qid>\\t<docid>)")->required();
    f->add_option("--folds", ft.folds, "number of folds")->capture_default_str();
    f->add_option("--batch", ft.batch, "batch size")->capture_default_str();
    f->add_option("--epochs", ft.epochs, "epochs per fold")->capture_default_str();
    f->add_option("--lr", ft.learning_rate, "learning rate")->capture_default_str();
    f->add_option("--depth", ft.depth, "entries per query in the merged run")->capture_default_str();
    f->add_option("--tag", ft.tag, "run tag")->capture_default_str();
    f->add_option("--out-dir", ft.out_dir, "directory for adapters and the merged run")->required();

    cp::PositionsOptions pos;
    ConfigFlags pos_flags;
    std::string pos_out;
    auto* an = app.add_subcommand("analyze", "analyses over ranked parts");
    an->require_subcommand(1);
    auto* ap = an->add_subcommand("positions", "histogram of best-part positions");
    pos_flags.attach(ap);
    ap->add_option("--top", pos.top, "parts considered per query")->capture_default_str();
    ap->add_option("--out", pos_out, "histogram output")->required();

    cp::StatsOptions stats;
    std::string stats_gran = "segment", stats_out;
    auto* s = app.add_subcommand("stats", "part counts and slowdown factor");
    s->add_option("--docs", stats.docs, "document collection")->required();
    s->add_option("--granularity", stats_gran, "document|segment|sentence")->capture_default_str();
    s->add_option("--window", stats.window, "segment length")->capture_default_str();
    s->add_option("--stride", stats.stride, "segment stride")->capture_default_str();
    s->add_option("--out", stats_out, "also write the table here");

    cp::ConvertOptions conv;
    std::size_t conv_limit = 0;
    auto* c = app.add_subcommand("convert", "convert embedding containers between text and binary");
    c->add_option("--in", conv.in, "input store")->required();
    c->add_option("--out", conv.out, "output store")->required();
    c->add_option("--to", conv.to, "text|binary")->capture_default_str();
    c->add_option("--limit", conv_limit, "keep only the first N entries (0 = all)");

    try {
        auto args = expand_config(argc, argv);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "clir: error: " << e.what() << '\n';
        return 1;
    }

    try {
        if (a->parsed()) {
            align.seed = seed;
            align.out = align_out;
            align.vocab_limit = positive_or_none(align_vocab);
            align.nn_limit = positive_or_none(align_nn);
            if (!align_projected.empty()) align.projected_out = align_projected;
            cp::run_align(align, std::cout);
        } else if (r->parsed()) {
            rank.config = rank_flags.resolve(seed);
            rank.out = rank_out;
            cp::run_rank(rank, std::cout);
        } else if (rr->parsed()) {
            rerank.out = rerank_out;
            cp::run_rerank(rerank, std::cout);
        } else if (e->parsed()) {
            eval.seed = seed;
            if (!eval_report.empty()) eval.report_out = eval_report;
            if (!eval_records.empty()) eval.records_out = eval_records;
            cp::run_eval(eval, std::cout);
        } else if (f->parsed()) {
            ft.config = ft_flags.resolve(seed);
            cp::run_finetune(ft, std::cout);
        } else if (ap->parsed()) {
            pos.config = pos_flags.resolve(seed);
            pos.out = pos_out;
            cp::run_analyze_positions(pos, std::cout);
        } else if (s->parsed()) {
            stats.granularity = clir::parse_granularity(stats_gran);
            if (!stats_out.empty()) stats.out = stats_out;
            cp::run_stats(stats, std::cout);
        } else if (c->parsed()) {
            conv.limit = positive_or_none(conv_limit);
            cp::run_convert(conv, std::cout);
        }
    } catch (const std::exception& ex) {
        std::cerr << "clir: error: " << ex.what() << '\n';
        return 1;
    }
    return 0;
}
