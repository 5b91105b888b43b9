// Copyright 2026 The clirbench Authors
// SPDX-License-Identifier: Apache-2.0

#include "clir/projection.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "clir/error.hpp"
#include "clir/kernels.hpp"
#include "clir/text.hpp"

namespace clir {

BilingualDictionary read_dictionary(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open dictionary " + path.string());
    BilingualDictionary dict;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto trimmed = text::trim(line);
        if (trimmed.empty() || trimmed.front() == '#') continue;
        auto fields = text::split_tab(trimmed);
        if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
            throw ParseError(path.string() + ": line " + std::to_string(lineno) +
                             ": expected <source>\\t<target>");
        }
        dict.pairs.emplace_back(std::string(fields[0]), std::string(fields[1]));
    }
    return dict;
}

DictionaryFilter filter_dictionary(const BilingualDictionary& dict, const EmbeddingStore& src,
                                   const EmbeddingStore& tgt) {
    DictionaryFilter out;
    for (const auto& p : dict.pairs) {
        if (src.contains(p.first) && tgt.contains(p.second)) {
            out.usable.pairs.push_back(p);
        } else {
            out.excluded.push_back(p);
        }
    }
    return out;
}

std::pair<Matrix, Matrix> assemble_matrices(const BilingualDictionary& dict, const EmbeddingStore& src,
                                            const EmbeddingStore& tgt) {
    if (src.dim() != tgt.dim()) {
        throw DimensionError("cannot align stores of dimension " + std::to_string(src.dim()) + " and " +
                             std::to_string(tgt.dim()));
    }
    Matrix xs(dict.size(), src.dim());
    Matrix xt(dict.size(), tgt.dim());
    for (std::size_t k = 0; k < dict.size(); ++k) {
        const auto s = src.lookup(dict.pairs[k].first);
        const auto t = tgt.lookup(dict.pairs[k].second);
        if (!s || !t) {
            throw Error("dictionary pair (" + dict.pairs[k].first + ", " + dict.pairs[k].second +
                        ") is out of vocabulary");
        }
        std::copy(s->begin(), s->end(), xs.row(k).begin());
        std::copy(t->begin(), t->end(), xt.row(k).begin());
    }
    return {std::move(xs), std::move(xt)};
}

ProjectionMatrix procrustes(const Matrix& xs, const Matrix& xt) {
    if (xs.rows() != xt.rows() || xs.cols() != xt.cols()) {
        throw DimensionError("procrustes: X_S is " + std::to_string(xs.rows()) + "x" + std::to_string(xs.cols()) +
                             " but X_T is " + std::to_string(xt.rows()) + "x" + std::to_string(xt.cols()));
    }
    if (xs.rows() == 0 || xs.cols() == 0) throw Error("procrustes: empty input");
    const Matrix m = kernels::parallel::cross_covariance(xs, xt);
    SvdResult svd = jacobi_svd(m);
    return ProjectionMatrix{svd.u * svd.v.transposed(), svd.rank_deficient};
}

double procrustes_residual(const Matrix& xs, const Matrix& xt, const Matrix& w) {
    return frobenius_norm(xs * w - xt);
}

EmbeddingStore project(const EmbeddingStore& store, const ProjectionMatrix& w) {
    if (w.w.rows() != store.dim() || w.w.cols() != store.dim()) {
        throw DimensionError("project: store dimension " + std::to_string(store.dim()) + " vs matrix " +
                             std::to_string(w.w.rows()) + "x" + std::to_string(w.w.cols()));
    }
    auto data = kernels::parallel::project_rows(
        kernels::RowView<float>{store.data(), store.size(), store.dim()}, w.w);
    return EmbeddingStore(store.dim(), store.vocab(), std::move(data));
}

BilingualDictionary mutual_nn_augment(const EmbeddingStore& src, const EmbeddingStore& tgt,
                                      const ProjectionMatrix& w, const BilingualDictionary& seed,
                                      const NeighbourSearch& search) {
    if (src.empty() || tgt.empty()) throw Error("mutual_nn_augment: empty store");
    if (src.dim() != tgt.dim()) throw DimensionError("mutual_nn_augment: store dimensions differ");
    const std::size_t ns = std::min(src.size(), search.limit.value_or(src.size()));
    const std::size_t nt = std::min(tgt.size(), search.limit.value_or(tgt.size()));
    const std::size_t d = src.dim();

    const kernels::RowView<float> src_rows{src.data().first(ns * d), ns, d};
    const kernels::RowView<float> tgt_rows{tgt.data().first(nt * d), nt, d};
    std::vector<float> projected = search.parallel ? kernels::parallel::project_rows(src_rows, w.w)
                                                   : kernels::serial::project_rows(src_rows, w.w);
    const kernels::RowView<float> proj_rows{projected, ns, d};
    const auto sn = search.parallel ? kernels::parallel::normalize_rows(proj_rows)
                                    : kernels::serial::normalize_rows(proj_rows);
    const auto tn = search.parallel ? kernels::parallel::normalize_rows(tgt_rows)
                                    : kernels::serial::normalize_rows(tgt_rows);
    const kernels::RowView<double> sv{sn, ns, d};
    const kernels::RowView<double> tv{tn, nt, d};
    const auto fwd = search.parallel ? kernels::parallel::nearest_rows(sv, tv) : kernels::serial::nearest_rows(sv, tv);
    const auto bwd = search.parallel ? kernels::parallel::nearest_rows(tv, sv) : kernels::serial::nearest_rows(tv, sv);

    BilingualDictionary out;
    std::set<std::pair<Token, Token>> seen;
    for (const auto& p : seed.pairs) {
        if (seen.insert(p).second) out.pairs.push_back(p);
    }
    for (std::size_t s = 0; s < ns; ++s) {
        if (bwd[fwd[s]] != s) continue;
        std::pair<Token, Token> p{src.vocab()[s], tgt.vocab()[fwd[s]]};
        if (seen.insert(p).second) out.pairs.push_back(std::move(p));
    }
    return out;
}

ProcBResult proc_b(const EmbeddingStore& src, const EmbeddingStore& tgt, const BilingualDictionary& seed,
                   std::size_t iterations, const NeighbourSearch& search) {
    if (iterations == 0) throw Error("proc_b: iterations must be positive");
    if (src.dim() != tgt.dim()) throw DimensionError("proc_b: store dimensions differ");
    auto filtered = filter_dictionary(seed, src, tgt);
    if (filtered.usable.empty()) throw Error("no trainable pairs");

    ProcBResult result;
    result.excluded_seed_pairs = std::move(filtered.excluded);
    BilingualDictionary dict = std::move(filtered.usable);
    for (std::size_t round = 0; round < iterations; ++round) {
        const auto [xs, xt] = assemble_matrices(dict, src, tgt);
        result.projection = procrustes(xs, xt);
        result.residuals.push_back(procrustes_residual(xs, xt, result.projection.w));
        result.dictionary_sizes.push_back(dict.size());
        if (round + 1 < iterations) dict = mutual_nn_augment(src, tgt, result.projection, dict, search);
    }
    result.dictionary = std::move(dict);
    return result;
}

void write_matrix(const Matrix& m, const std::filesystem::path& path) {
    std::vector<Token> keys;
    std::vector<float> data;
    keys.reserve(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        keys.push_back(std::to_string(r));
        for (double x : m.row(r)) data.push_back(static_cast<float>(x));
    }
    write_embeddings_binary(EmbeddingStore(m.cols(), std::move(keys), std::move(data)), path);
}

Matrix read_matrix(const std::filesystem::path& path) {
    const EmbeddingStore store = load_embeddings(path);
    Matrix m(store.size(), store.dim());
    for (std::size_t r = 0; r < store.size(); ++r) {
        if (store.vocab()[r] != std::to_string(r)) {
            throw ParseError(path.string() + ": matrix row " + std::to_string(r) + " has key '" +
                             store.vocab()[r] + "'");
        }
        const auto row = store.row(r);
        std::copy(row.begin(), row.end(), m.row(r).begin());
    }
    return m;
}

}  // namespace clir
