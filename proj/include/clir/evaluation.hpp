// Copyright 2026 The clirbench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "clir/corpus.hpp"
#include "clir/retrieval.hpp"

namespace clir {

struct Qrels {
    std::map<std::pair<std::string, std::string>, int> judgments;
    std::vector<std::string> warnings;

    /// Documents with grade >= 1 for the query.
    std::set<std::string> relevant(const std::string& query_id) const;
    std::set<std::string> queries() const;

    friend bool operator==(const Qrels& a, const Qrels& b) { return a.judgments == b.judgments; }
};

/// `<query_id> 0 <doc_id> <grade>` lines. A repeated (query, doc) keeps the
/// last grade and records a warning.
Qrels parse_qrels(const std::filesystem::path& path);
void write_qrels(const Qrels& qrels, const std::filesystem::path& path);

/// Mean of precision@r over the ranks r of the relevant documents; relevant
/// documents that were not retrieved contribute 0. Throws on an empty set.
double average_precision(const Ranking& ranking, const std::set<std::string>& relevant);

struct MapResult {
    double map = 0.0;
    /// (query_id, AP) sorted by query id, evaluable queries only.
    std::vector<std::pair<std::string, double>> per_query;
    /// Queries in the runs with no relevant document in the qrels.
    std::vector<std::string> skipped;
};

MapResult mean_average_precision(const std::vector<Ranking>& runs, const Qrels& qrels);

struct SignificanceReport {
    double t_statistic = 0.0;
    double p_value = 1.0;
    double corrected_alpha = 0.05;
    bool significant = false;
    std::size_t num_comparisons = 1;
    /// Non-zero mean difference with zero spread: p is taken as 0.
    bool degenerate = false;
};

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

/// Two-tailed p-value of Student's t with `dof` degrees of freedom.
double student_t_two_tailed(double t, double dof);

/// Paired two-tailed t-test on a - b; significant iff p <= alpha / m.
SignificanceReport paired_ttest(const std::vector<double>& ap_a, const std::vector<double>& ap_b, std::size_t m,
                                double alpha);

/// Proportions for positions 1..10 and a final ">10" bin, pooled over all
/// queries. Sums to 1.
std::array<double, 11> position_histogram(const std::vector<std::vector<Segment>>& per_query_top_parts);

}  // namespace clir
