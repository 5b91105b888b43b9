// Copyright 2026 The clirbench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "clir/corpus.hpp"
#include "clir/embeddings.hpp"
#include "clir/retrieval.hpp"

/// Command implementations behind the `clir` executable. Every command writes
/// its files through OutputFile, so a failing command leaves nothing behind.
namespace clir::pipeline {

namespace fs = std::filesystem;

/// Separates the document id from the part position in container keys.
inline constexpr char kPartSeparator = '\x01';
/// Separates a text key from a per-term suffix in SEMB term-state containers.
inline constexpr char kTermSeparator = '\x02';

enum class Encoding { iso, aoc, semb, static_embeddings };
Encoding parse_encoding(std::string_view name);

/// Settings shared by the retrieval-side commands.
struct ExperimentConfig {
    Encoding encoding = Encoding::static_embeddings;
    Granularity granularity = Granularity::document;
    std::size_t k = 1;
    std::size_t window = 128;
    std::size_t stride = 42;
    std::size_t tau = 60;
    int layer = -1;              // forwarded from exporter artifacts; -1 = unspecified
    std::size_t max_seq_len = 128;
    double temperature = 20.0;
    double mu = 1000.0;
    std::uint64_t seed = 42;
    std::optional<std::size_t> vocab_limit = 100000;

    fs::path queries;
    fs::path docs;
    fs::path query_store;
    fs::path doc_store;
    std::optional<fs::path> projection;
    std::optional<fs::path> query_vectors;
    std::optional<fs::path> doc_vectors;

    /// Throws with a message naming the first invalid field or missing file.
    void validate(bool needs_queries, bool needs_embeddings) const;
    /// One-line summary for report headers.
    std::string describe() const;
};

/// Writes to `<path>.tmp` and renames on commit(); the temporary is removed
/// if the object dies uncommitted. Relative paths are resolved under
/// $CLIR_OUTPUT_DIR when it is set.
class OutputFile {
public:
    explicit OutputFile(fs::path path);
    OutputFile(const OutputFile&) = delete;
    OutputFile& operator=(const OutputFile&) = delete;
    ~OutputFile();

    const fs::path& path() const { return final_; }
    const fs::path& temp_path() const { return temp_; }
    std::ostream& stream();
    void commit();

private:
    fs::path final_;
    fs::path temp_;
    std::unique_ptr<std::ofstream> out_;
    bool committed_ = false;
};

fs::path resolve_output(const fs::path& path);

/// Text vectors from an exporter container. Keys are `<id>` or
/// `<doc_id>\x01<position>`; SEMB term-state containers hold
/// `<key>\x02<index>\x02<term>` plus `<key>\x02start` / `<key>\x02end`, and
/// are combined here with idf weights (documents) or unit weights (queries).
std::map<std::string, TextRepresentation> load_text_vectors(const fs::path& path, const CollectionStats* idf_stats);

struct AlignOptions {
    std::string method = "procrustes";
    fs::path dict;
    fs::path src;
    fs::path tgt;
    std::size_t iterations = 2;
    std::optional<std::size_t> vocab_limit;
    std::optional<std::size_t> nn_limit;
    fs::path out;
    std::optional<fs::path> projected_out;
    std::uint64_t seed = 42;
};
void run_align(const AlignOptions& opt, std::ostream& report);

struct RankOptions {
    ExperimentConfig config;
    std::string model = "embedding";  // embedding | qlm
    std::size_t depth = 1000;
    std::string tag = "clir";
    fs::path out;
};
void run_rank(const RankOptions& opt, std::ostream& report);

/// Rankings for every query, shared by rank/finetune/analyze.
std::vector<Ranking> rank_queries(const ExperimentConfig& config, std::ostream* report = nullptr);

struct RerankOptions {
    fs::path run;
    fs::path scores;
    std::size_t top_n = 100;
    std::string tag = "rerank";
    fs::path out;
};
void run_rerank(const RerankOptions& opt, std::ostream& report);

struct EvalOptions {
    fs::path qrels;
    std::vector<fs::path> runs;
    std::size_t bonferroni_m = 9;
    double alpha = 0.05;
    std::optional<fs::path> report_out;
    std::optional<fs::path> records_out;
    std::uint64_t seed = 42;
};
void run_eval(const EvalOptions& opt, std::ostream& report);

struct FinetuneOptions {
    ExperimentConfig config;
    fs::path train_pairs;
    std::size_t folds = 10;
    std::size_t batch = 16;
    std::size_t epochs = 10;
    double learning_rate = 0.05;
    std::size_t depth = 1000;
    std::string tag = "finetuned";
    fs::path out_dir;
};
void run_finetune(const FinetuneOptions& opt, std::ostream& report);

struct PositionsOptions {
    ExperimentConfig config;
    std::size_t top = 100;
    fs::path out;
};
void run_analyze_positions(const PositionsOptions& opt, std::ostream& report);

struct StatsOptions {
    fs::path docs;
    Granularity granularity = Granularity::segment;
    std::size_t window = 128;
    std::size_t stride = 42;
    std::optional<fs::path> out;
};
void run_stats(const StatsOptions& opt, std::ostream& report);

struct ConvertOptions {
    fs::path in;
    fs::path out;
    std::string to = "binary";
    std::optional<std::size_t> limit;
};
void run_convert(const ConvertOptions& opt, std::ostream& report);

}  // namespace clir::pipeline
