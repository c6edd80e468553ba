#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "boksim/corpus.hpp"
#include "boksim/simrank.hpp"

namespace boksim::eval {

using simrank::Ranking;

// Ground truth for one query: the relevant set and the candidate pool size
// (every other topic, so N - 1).
struct QueryJudgment {
    std::string query_id;
    std::set<std::string> relevant;
    std::size_t candidate_pool = 0;
};

QueryJudgment judgment_for(const corpus::Corpus& corpus, const corpus::Topic& topic);

// Number of ranked candidates that are relevant.
std::size_t hits(const Ranking& ranking, const QueryJudgment& judgment);

// hits / |relevant|. Throws ValidationError when nothing is relevant.
double recall_at_k(const Ranking& ranking, const QueryJudgment& judgment);
// hits / |ranking|. Throws ValidationError on an empty ranking.
double precision_at_k(const Ranking& ranking, const QueryJudgment& judgment);
// Harmonic mean of recall and precision, 0 when both are 0.
double f_at_k(const Ranking& ranking, const QueryJudgment& judgment);
// Mean of the true-positive rate (recall) and the true-negative rate
// 1 - false positives / (pool - |relevant|). Throws when pool <= |relevant|.
double balanced_accuracy_at_k(const Ranking& ranking, const QueryJudgment& judgment);

struct MetricSet {
    double recall = 0.0;
    double precision = 0.0;
    double f = 0.0;
    double balanced_accuracy = 0.0;

    bool operator==(const MetricSet&) const = default;
};

MetricSet metrics_at_k(const Ranking& ranking, const QueryJudgment& judgment);

struct MetricsReport {
    std::vector<std::size_t> ks;
    std::map<std::string, std::vector<MetricSet>> per_query;  // one entry per k
    std::vector<MetricSet> macro;                             // one entry per k
    std::size_t included_query_count = 0;
    std::size_t skipped_query_count = 0;  // queries with no relevant topics
};

// Per-query metrics at every k (rankings are truncated to each k), macro
// averaged over queries with a non-empty relevant set.
MetricsReport evaluate(std::span<const Ranking> rankings, const corpus::Corpus& corpus,
                       std::span<const std::size_t> ks);

// Rows: each query, then MACRO; columns: <metric>@<k>.
std::string report_to_csv(const MetricsReport& report);
std::string report_to_json(const MetricsReport& report);

}  // namespace boksim::eval
