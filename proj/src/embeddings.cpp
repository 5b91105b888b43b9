// Copyright 2026 The clirbench Authors
// SPDX-License-Identifier: Apache-2.0

#include "clir/embeddings.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>

#include "clir/error.hpp"
#include "clir/text.hpp"

namespace clir {

EmbeddingStore::EmbeddingStore(std::size_t dim, std::vector<Token> vocab, std::vector<float> data)
    : dim_(dim), vocab_(std::move(vocab)), data_(std::move(data)) {
    if (data_.size() != vocab_.size() * dim_) {
        throw DimensionError("embedding store: expected " + std::to_string(vocab_.size() * dim_) +
                             " values, got " + std::to_string(data_.size()));
    }
    index_.reserve(vocab_.size());
    for (std::size_t i = 0; i < vocab_.size(); ++i) {
        if (!index_.emplace(vocab_[i], i).second) {
            throw Error("embedding store: duplicate token '" + vocab_[i] + "'");
        }
    }
    for (float v : data_) {
        if (!std::isfinite(v)) throw Error("embedding store: non-finite component");
    }
}

std::optional<std::size_t> EmbeddingStore::index_of(const Token& t) const {
    const auto it = index_.find(t);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::span<const float>> EmbeddingStore::lookup(const Token& t) const {
    const auto idx = index_of(t);
    if (!idx) return std::nullopt;
    return row(*idx);
}

EmbeddingStore make_store(std::size_t dim, const std::vector<std::pair<Token, Vector>>& entries) {
    std::vector<Token> vocab;
    std::vector<float> data;
    vocab.reserve(entries.size());
    data.reserve(entries.size() * dim);
    for (const auto& [tok, vec] : entries) {
        if (vec.size() != dim) {
            throw DimensionError("make_store: '" + tok + "' has " + std::to_string(vec.size()) +
                                 " components, expected " + std::to_string(dim));
        }
        vocab.push_back(tok);
        for (double v : vec) data.push_back(static_cast<float>(v));
    }
    return EmbeddingStore(dim, std::move(vocab), std::move(data));
}

namespace {

template <typename T>
bool parse_number(std::string_view s, T& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

std::string at_line(const std::filesystem::path& path, std::size_t lineno) {
    return path.string() + ": line " + std::to_string(lineno) + ": ";
}

}  // namespace

EmbeddingStore load_embeddings_text(const std::filesystem::path& path, std::optional<std::size_t> limit) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    std::string line;
    std::size_t lineno = 1;
    if (!std::getline(in, line)) throw ParseError(at_line(path, 1) + "missing header");
    const auto header = text::split_fields(text::trim(line));
    std::size_t count = 0;
    std::size_t dim = 0;
    if (header.size() != 2 || !parse_number(header[0], count) || !parse_number(header[1], dim) || dim == 0) {
        throw ParseError(at_line(path, 1) + "expected header '<count> <dim>'");
    }
    const std::size_t keep = limit ? std::min(count, *limit) : count;
    std::vector<Token> vocab;
    std::vector<float> data;
    vocab.reserve(keep);
    data.reserve(keep * dim);
    while (vocab.size() < keep && std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto fields = text::split_fields(line);
        if (fields.empty()) throw ParseError(at_line(path, lineno) + "empty row");
        if (fields.size() - 1 != dim) {
            throw ParseError(at_line(path, lineno) + "expected " + std::to_string(dim) + " values");
        }
        for (std::size_t k = 1; k < fields.size(); ++k) {
            float v = 0;
            if (!parse_number(fields[k], v)) {
                throw ParseError(at_line(path, lineno) + "bad number '" + std::string(fields[k]) + "'");
            }
            data.push_back(v);
        }
        vocab.emplace_back(fields[0]);
    }
    if (vocab.size() < keep) {
        throw ParseError(path.string() + ": header declares " + std::to_string(count) + " rows, found " +
                         std::to_string(vocab.size()));
    }
    try {
        return EmbeddingStore(dim, std::move(vocab), std::move(data));
    } catch (const Error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void write_embeddings_text(const EmbeddingStore& store, const std::filesystem::path& path) {
    std::unique_ptr<FILE, int (*)(FILE*)> f(std::fopen(path.c_str(), "wb"), &std::fclose);
    if (!f) throw Error("cannot write " + path.string());
    std::fprintf(f.get(), "%zu %zu\n", store.size(), store.dim());
    for (std::size_t i = 0; i < store.size(); ++i) {
        std::fputs(store.vocab()[i].c_str(), f.get());
        for (float v : store.row(i)) std::fprintf(f.get(), " %.6f", static_cast<double>(v));
        std::fputc('\n', f.get());
    }
    if (std::ferror(f.get())) throw Error("write failed: " + path.string());
}

namespace {

constexpr char kMagic[4] = {'E', 'M', 'B', '1'};

void put_u16(std::string& out, std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xFF));
    out.push_back(static_cast<char>(v >> 8));
}

void put_u32(std::string& out, std::uint32_t v) {
    for (int k = 0; k < 4; ++k) out.push_back(static_cast<char>((v >> (8 * k)) & 0xFF));
}

class ByteReader {
public:
    ByteReader(const std::string& buf, const std::filesystem::path& path) : buf_(buf), path_(path) {}

    std::size_t offset() const { return pos_; }

    void need(std::size_t n, const char* what) const {
        if (buf_.size() - pos_ < n) {
            throw ParseError(path_.string() + ": truncated file at offset " + std::to_string(pos_) +
                             " (reading " + what + ")");
        }
    }

    std::uint16_t u16(const char* what) {
        need(2, what);
        const auto* p = reinterpret_cast<const unsigned char*>(buf_.data() + pos_);
        pos_ += 2;
        return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
    }

    std::uint32_t u32(const char* what) {
        need(4, what);
        const auto* p = reinterpret_cast<const unsigned char*>(buf_.data() + pos_);
        pos_ += 4;
        return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
               (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
    }

    std::string bytes(std::size_t n, const char* what) {
        need(n, what);
        std::string s = buf_.substr(pos_, n);
        pos_ += n;
        return s;
    }

private:
    const std::string& buf_;
    const std::filesystem::path& path_;
    std::size_t pos_ = 0;
};

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

void write_embeddings_binary(const EmbeddingStore& store, const std::filesystem::path& path) {
    if (store.size() > UINT32_MAX || store.dim() > UINT32_MAX) throw Error("store too large for EMB1");
    std::string out(kMagic, 4);
    put_u32(out, static_cast<std::uint32_t>(store.size()));
    put_u32(out, static_cast<std::uint32_t>(store.dim()));
    for (std::size_t i = 0; i < store.size(); ++i) {
        const auto& tok = store.vocab()[i];
        if (tok.size() > UINT16_MAX) throw Error("token longer than 65535 bytes: " + tok.substr(0, 32));
        put_u16(out, static_cast<std::uint16_t>(tok.size()));
        out += tok;
        for (float v : store.row(i)) put_u32(out, std::bit_cast<std::uint32_t>(v));
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write " + path.string());
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw Error("write failed: " + path.string());
}

EmbeddingStore read_embeddings_binary(const std::filesystem::path& path, std::optional<std::size_t> limit) {
    const std::string buf = slurp(path);
    ByteReader r(buf, path);
    if (buf.size() < 4 || std::memcmp(buf.data(), kMagic, 4) != 0) {
        throw ParseError(path.string() + ": bad magic at offset 0");
    }
    r.bytes(4, "magic");
    const std::uint32_t count = r.u32("count");
    const std::uint32_t dim = r.u32("dim");
    const std::size_t keep = limit ? std::min<std::size_t>(count, *limit) : count;
    std::vector<Token> vocab;
    std::vector<float> data;
    vocab.reserve(keep);
    data.reserve(keep * dim);
    for (std::size_t i = 0; i < keep; ++i) {
        const std::uint16_t len = r.u16("token length");
        vocab.push_back(r.bytes(len, "token"));
        r.need(static_cast<std::size_t>(dim) * 4, "vector");
        for (std::uint32_t k = 0; k < dim; ++k) data.push_back(std::bit_cast<float>(r.u32("vector")));
    }
    try {
        return EmbeddingStore(dim, std::move(vocab), std::move(data));
    } catch (const Error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

EmbeddingStore load_embeddings(const std::filesystem::path& path, std::optional<std::size_t> limit) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    char head[4] = {};
    in.read(head, 4);
    if (in.gcount() == 4 && std::memcmp(head, kMagic, 4) == 0) return read_embeddings_binary(path, limit);
    return load_embeddings_text(path, limit);
}

Vector pool_subwords(const SubwordGroup& group) {
    if (group.vectors.empty()) throw Error("pool_subwords: empty subword group");
    const std::size_t dim = group.vectors.front().size();
    Vector out(dim, 0.0);
    for (const auto& v : group.vectors) {
        if (v.size() != dim) throw DimensionError("pool_subwords: non-uniform dimension");
        for (std::size_t k = 0; k < dim; ++k) out[k] += v[k];
    }
    const double n = static_cast<double>(group.vectors.size());
    for (auto& x : out) x /= n;
    return out;
}

Vector first_subword(const SubwordGroup& group) {
    if (group.vectors.empty()) throw Error("first_subword: empty subword group");
    return group.vectors.front();
}

ContextSet make_context_set(Token term, std::vector<Vector> available, std::size_t cap) {
    if (cap == 0) throw Error("context cap must be positive");
    if (available.size() > cap) available.resize(cap);
    return ContextSet{std::move(term), std::move(available), cap};
}

Vector aoc_embed(const ContextSet& ctx, const Vector& fallback) {
    if (ctx.context_vectors.empty()) return fallback;
    return pool_subwords(SubwordGroup{ctx.context_vectors});
}

Vector semb_embed(const std::vector<SubwordGroup>& token_groups, const std::vector<double>& idf_weights,
                  const std::pair<SubwordGroup, SubwordGroup>& special_tokens) {
    if (token_groups.size() != idf_weights.size()) {
        throw DimensionError("semb_embed: " + std::to_string(token_groups.size()) + " terms but " +
                             std::to_string(idf_weights.size()) + " weights");
    }
    if (token_groups.empty()) throw Error("semb_embed: no terms");
    const std::size_t dim = first_subword(token_groups.front()).size();
    Vector out(dim, 0.0);
    double idf_sum = 0.0;
    for (std::size_t i = 0; i < token_groups.size(); ++i) {
        const Vector v = first_subword(token_groups[i]);
        if (v.size() != dim) throw DimensionError("semb_embed: non-uniform dimension");
        for (std::size_t k = 0; k < dim; ++k) out[k] += idf_weights[i] * v[k];
        idf_sum += idf_weights[i];
    }
    const double mean_idf = idf_sum / static_cast<double>(idf_weights.size());
    for (const SubwordGroup* special : {&special_tokens.first, &special_tokens.second}) {
        if (special->vectors.empty()) continue;
        const Vector v = first_subword(*special);
        if (v.size() != dim) throw DimensionError("semb_embed: special token dimension mismatch");
        for (std::size_t k = 0; k < dim; ++k) out[k] += mean_idf * v[k];
    }
    return out;
}

Vector to_vector(std::span<const float> row) { return Vector(row.begin(), row.end()); }

}  // namespace clir
