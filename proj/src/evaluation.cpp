// Copyright 2026 The clirbench Authors
// SPDX-License-Identifier: Apache-2.0

#include "clir/evaluation.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

#include "clir/error.hpp"
#include "clir/text.hpp"

namespace clir {

std::set<std::string> Qrels::relevant(const std::string& query_id) const {
    std::set<std::string> out;
    for (auto it = judgments.lower_bound({query_id, std::string()});
         it != judgments.end() && it->first.first == query_id; ++it) {
        if (it->second >= 1) out.insert(it->first.second);
    }
    return out;
}

std::set<std::string> Qrels::queries() const {
    std::set<std::string> out;
    for (const auto& [key, grade] : judgments) out.insert(key.first);
    return out;
}

Qrels parse_qrels(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open qrels " + path.string());
    Qrels qrels;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto f = text::split_fields(text::trim(line));
        if (f.empty()) continue;
        int grade = 0;
        const bool ok = f.size() == 4 &&
                        std::from_chars(f[3].data(), f[3].data() + f[3].size(), grade).ptr == f[3].data() + f[3].size();
        if (!ok || grade < 0) {
            throw ParseError(path.string() + ": line " + std::to_string(lineno) +
                             ": expected <query_id> 0 <doc_id> <grade>");
        }
        auto key = std::make_pair(std::string(f[0]), std::string(f[2]));
        auto [it, inserted] = qrels.judgments.insert_or_assign(key, grade);
        if (!inserted) {
            qrels.warnings.push_back(path.string() + ": line " + std::to_string(lineno) + ": duplicate judgment for (" +
                                     key.first + ", " + key.second + "), keeping grade " + std::to_string(grade));
        }
    }
    return qrels;
}

void write_qrels(const Qrels& qrels, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    for (const auto& [key, grade] : qrels.judgments) out << key.first << " 0 " << key.second << ' ' << grade << '\n';
}

double average_precision(const Ranking& ranking, const std::set<std::string>& relevant) {
    if (relevant.empty()) throw Error("average_precision: query '" + ranking.query_id + "' has no relevant documents");
    std::size_t hits = 0;
    double sum = 0.0;
    for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
        if (relevant.count(ranking.entries[i].doc_id) != 0) {
            ++hits;
            sum += static_cast<double>(hits) / static_cast<double>(i + 1);
        }
    }
    return sum / static_cast<double>(relevant.size());
}

MapResult mean_average_precision(const std::vector<Ranking>& runs, const Qrels& qrels) {
    MapResult out;
    std::map<std::string, const Ranking*> by_query;
    for (const auto& r : runs) by_query.emplace(r.query_id, &r);
    for (const auto& [qid, ranking] : by_query) {
        const auto rel = qrels.relevant(qid);
        if (rel.empty()) {
            out.skipped.push_back(qid);
            continue;
        }
        out.per_query.emplace_back(qid, average_precision(*ranking, rel));
    }
    if (out.per_query.empty()) throw Error("no evaluable queries");
    double sum = 0.0;
    for (const auto& [qid, ap] : out.per_query) sum += ap;
    out.map = sum / static_cast<double>(out.per_query.size());
    return out;
}

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw Error("incomplete_beta: a and b must be positive");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    if (x > (a + 1.0) / (a + b + 2.0)) return 1.0 - incomplete_beta(b, a, 1.0 - x);

    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-16;
    const double front =
        std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x)) / a;

    // Modified Lentz evaluation of the continued fraction.
    double c = 1.0;
    double d = 1.0 - (a + b) * x / (a + 1.0);
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 1000; ++m) {
        const double m2 = 2.0 * m;
        double num = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
        d = 1.0 + num * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + num / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        num = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
        d = 1.0 + num * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + num / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < eps) break;
    }
    return front * h;
}

double student_t_two_tailed(double t, double dof) {
    if (!(dof > 0.0)) throw Error("student_t_two_tailed: degrees of freedom must be positive");
    if (std::isinf(t)) return 0.0;
    return incomplete_beta(dof / 2.0, 0.5, dof / (dof + t * t));
}

SignificanceReport paired_ttest(const std::vector<double>& ap_a, const std::vector<double>& ap_b, std::size_t m,
                                double alpha) {
    if (ap_a.size() != ap_b.size()) {
        throw DimensionError("paired_ttest: " + std::to_string(ap_a.size()) + " vs " + std::to_string(ap_b.size()) +
                             " observations");
    }
    if (ap_a.size() < 2) throw Error("paired_ttest: at least two paired observations required");
    if (m == 0) throw Error("paired_ttest: number of comparisons must be positive");

    SignificanceReport rep;
    rep.num_comparisons = m;
    rep.corrected_alpha = alpha / static_cast<double>(m);
    const auto n = static_cast<double>(ap_a.size());
    std::vector<double> diff(ap_a.size());
    bool all_zero = true;
    double mean = 0.0;
    for (std::size_t i = 0; i < diff.size(); ++i) {
        diff[i] = ap_a[i] - ap_b[i];
        all_zero = all_zero && diff[i] == 0.0;
        mean += diff[i];
    }
    if (all_zero) return rep;
    mean /= n;
    double ss = 0.0;
    for (double d : diff) ss += (d - mean) * (d - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    if (sd == 0.0) {
        rep.degenerate = true;
        rep.t_statistic = std::copysign(std::numeric_limits<double>::infinity(), mean);
        rep.p_value = 0.0;
    } else {
        rep.t_statistic = mean / (sd / std::sqrt(n));
        rep.p_value = student_t_two_tailed(rep.t_statistic, n - 1.0);
    }
    rep.significant = rep.p_value <= rep.corrected_alpha;
    return rep;
}

std::array<double, 11> position_histogram(const std::vector<std::vector<Segment>>& per_query_top_parts) {
    std::array<double, 11> counts{};
    std::size_t total = 0;
    for (const auto& parts : per_query_top_parts) {
        for (const auto& seg : parts) {
            if (seg.position == 0) throw Error("position_histogram: positions are 1-based");
            counts[std::min<std::size_t>(seg.position, 11) - 1] += 1.0;
            ++total;
        }
    }
    if (total == 0) throw Error("position_histogram: no parts");
    for (auto& c : counts) c /= static_cast<double>(total);
    return counts;
}

}  // namespace clir
