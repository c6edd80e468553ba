#include "boksim/evalmetrics.hpp"

#include <algorithm>

#include <json.hpp>

#include "boksim/error.hpp"
#include "boksim/io.hpp"

namespace boksim::eval {

QueryJudgment judgment_for(const corpus::Corpus& corpus, const corpus::Topic& topic) {
    QueryJudgment j;
    j.query_id = topic.id;
    j.relevant.insert(topic.related.begin(), topic.related.end());
    j.candidate_pool = corpus.size() == 0 ? 0 : corpus.size() - 1;
    return j;
}

std::size_t hits(const Ranking& ranking, const QueryJudgment& judgment) {
    std::size_t n = 0;
    for (const auto& c : ranking.entries) {
        n += judgment.relevant.count(c.id);
    }
    return n;
}

double recall_at_k(const Ranking& ranking, const QueryJudgment& judgment) {
    if (judgment.relevant.empty()) {
        throw ValidationError("recall undefined: query '" + judgment.query_id +
                              "' has no relevant topics");
    }
    return static_cast<double>(hits(ranking, judgment)) /
           static_cast<double>(judgment.relevant.size());
}

double precision_at_k(const Ranking& ranking, const QueryJudgment& judgment) {
    if (ranking.entries.empty()) {
        throw ValidationError("precision undefined: ranking for '" + ranking.query_id +
                              "' is empty");
    }
    return static_cast<double>(hits(ranking, judgment)) /
           static_cast<double>(ranking.entries.size());
}

double f_at_k(const Ranking& ranking, const QueryJudgment& judgment) {
    double r = recall_at_k(ranking, judgment);
    double p = precision_at_k(ranking, judgment);
    if (r == 0.0 || p == 0.0) {
        return 0.0;
    }
    return 2.0 / (1.0 / r + 1.0 / p);
}

double balanced_accuracy_at_k(const Ranking& ranking, const QueryJudgment& judgment) {
    const std::size_t relevant = judgment.relevant.size();
    if (relevant == 0) {
        throw ValidationError("balanced accuracy undefined: query '" + judgment.query_id +
                              "' has no relevant topics");
    }
    if (judgment.candidate_pool <= relevant) {
        throw ValidationError("balanced accuracy undefined: candidate pool " +
                              std::to_string(judgment.candidate_pool) + " <= relevant count " +
                              std::to_string(relevant) + " for '" + judgment.query_id + "'");
    }
    const double h = static_cast<double>(hits(ranking, judgment));
    const double tpr = 1.0 - (static_cast<double>(relevant) - h) / static_cast<double>(relevant);
    const double tnr = 1.0 - (static_cast<double>(ranking.entries.size()) - h) /
                                 static_cast<double>(judgment.candidate_pool - relevant);
    return (tpr + tnr) / 2.0;
}

MetricSet metrics_at_k(const Ranking& ranking, const QueryJudgment& judgment) {
    return {recall_at_k(ranking, judgment), precision_at_k(ranking, judgment),
            f_at_k(ranking, judgment), balanced_accuracy_at_k(ranking, judgment)};
}

MetricsReport evaluate(std::span<const Ranking> rankings, const corpus::Corpus& corpus,
                       std::span<const std::size_t> ks) {
    if (ks.empty()) {
        throw ValidationError("evaluation needs at least one k");
    }
    MetricsReport report;
    report.ks.assign(ks.begin(), ks.end());
    for (auto k : ks) {
        if (k < 1) {
            throw ValidationError("k must be >= 1");
        }
    }
    report.macro.assign(ks.size(), MetricSet{});
    const std::size_t pool = corpus.size() == 0 ? 0 : corpus.size() - 1;
    for (const auto& ranking : rankings) {
        const auto* topic = corpus.find(ranking.query_id);
        if (topic == nullptr) {
            throw ValidationError("ranking for unknown topic '" + ranking.query_id + "'");
        }
        if (report.per_query.count(ranking.query_id) != 0) {
            throw ValidationError("two rankings for topic '" + ranking.query_id + "'");
        }
        auto judgment = judgment_for(corpus, *topic);
        if (judgment.relevant.empty()) {
            ++report.skipped_query_count;
            continue;
        }
        std::vector<MetricSet> row;
        for (auto k : ks) {
            const std::size_t expected = std::min(k, pool);
            if (ranking.entries.size() < expected) {
                throw ValidationError("ranking for '" + ranking.query_id + "' has " +
                                      std::to_string(ranking.entries.size()) +
                                      " candidates, fewer than k=" + std::to_string(k));
            }
            row.push_back(metrics_at_k(simrank::truncate(ranking, k), judgment));
        }
        report.per_query.emplace(ranking.query_id, std::move(row));
        ++report.included_query_count;
    }
    if (report.included_query_count > 0) {
        const double n = static_cast<double>(report.included_query_count);
        for (std::size_t i = 0; i < ks.size(); ++i) {
            MetricSet sum;
            for (const auto& [id, row] : report.per_query) {
                sum.recall += row[i].recall;
                sum.precision += row[i].precision;
                sum.f += row[i].f;
                sum.balanced_accuracy += row[i].balanced_accuracy;
            }
            report.macro[i] = {sum.recall / n, sum.precision / n, sum.f / n,
                               sum.balanced_accuracy / n};
        }
    }
    return report;
}

namespace {

void append_row(std::string& out, const std::string& label, const std::vector<MetricSet>& row) {
    out += io::csv_escape(label);
    for (const auto& m : row) {
        for (double v : {m.recall, m.precision, m.f, m.balanced_accuracy}) {
            out += ',';
            out += io::format_double(v);
        }
    }
    out += '\n';
}

}  // namespace

std::string report_to_csv(const MetricsReport& report) {
    std::string out = "query";
    for (auto k : report.ks) {
        for (const char* name : {"recall", "precision", "f", "balanced_accuracy"}) {
            out += ',';
            out += name;
            out += '@' + std::to_string(k);
        }
    }
    out += '\n';
    for (const auto& [id, row] : report.per_query) {
        append_row(out, id, row);
    }
    append_row(out, "MACRO", report.macro);
    return out;
}

std::string report_to_json(const MetricsReport& report) {
    using ojson = nlohmann::ordered_json;
    auto metric_obj = [](const MetricSet& m) {
        ojson o;
        o["recall"] = m.recall;
        o["precision"] = m.precision;
        o["f"] = m.f;
        o["balanced_accuracy"] = m.balanced_accuracy;
        return o;
    };
    auto by_k = [&](const std::vector<MetricSet>& row) {
        ojson o = ojson::object();
        for (std::size_t i = 0; i < report.ks.size(); ++i) {
            o[std::to_string(report.ks[i])] = metric_obj(row[i]);
        }
        return o;
    };
    ojson out;
    out["aggregation"] = "macro";
    out["ks"] = report.ks;
    out["included_query_count"] = report.included_query_count;
    out["skipped_query_count"] = report.skipped_query_count;
    out["macro"] = by_k(report.macro);
    out["per_query"] = ojson::object();
    for (const auto& [id, row] : report.per_query) {
        out["per_query"][id] = by_k(row);
    }
    return out.dump(2) + "\n";
}

}  // namespace boksim::eval
