#include "boksim/simrank.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "boksim/error.hpp"
#include "boksim/io.hpp"

namespace boksim::simrank {

using nlohmann::json;

double cosine(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw ValidationError("cosine of vectors with dimensions " + std::to_string(a.size()) +
                              " and " + std::to_string(b.size()));
    }
    double dot = 0.0;
    double aa = 0.0;
    double bb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        aa += a[i] * a[i];
        bb += b[i] * b[i];
    }
    if (aa == 0.0 || bb == 0.0) {
        return 0.0;
    }
    double c = dot / (std::sqrt(aa) * std::sqrt(bb));
    return std::clamp(c, -1.0, 1.0);
}

double cosine(const DocVector& a, const DocVector& b) { return cosine(a.values, b.values); }

std::ptrdiff_t SimilarityMatrix::index_of(std::string_view id) const {
    auto it = std::find(topic_ids.begin(), topic_ids.end(), id);
    return it == topic_ids.end() ? -1 : it - topic_ids.begin();
}

SimilarityMatrix pairwise(std::span<const std::string> ids, std::span<const DocVector> vectors) {
    if (ids.size() != vectors.size()) {
        throw ValidationError("pairwise: ids and vectors differ in length");
    }
    const auto n = static_cast<Eigen::Index>(ids.size());
    for (std::size_t i = 1; i < vectors.size(); ++i) {
        if (vectors[i].dim() != vectors[0].dim()) {
            throw ValidationError("pairwise: mixed dimensions (" +
                                  std::to_string(vectors[0].dim()) + " vs " +
                                  std::to_string(vectors[i].dim()) + " for '" + ids[i] + "')");
        }
    }
    SimilarityMatrix m;
    m.topic_ids.assign(ids.begin(), ids.end());
    m.values.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        m.values(i, i) = vectors[static_cast<std::size_t>(i)].is_zero() ? 0.0 : 1.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            double c = cosine(vectors[static_cast<std::size_t>(i)], vectors[static_cast<std::size_t>(j)]);
            m.values(i, j) = c;
            m.values(j, i) = c;
        }
    }
    return m;
}

Ranking top_k(const SimilarityMatrix& matrix, std::string_view query_id, std::size_t k) {
    if (k < 1) {
        throw ValidationError("top_k needs k >= 1");
    }
    auto q = matrix.index_of(query_id);
    if (q < 0) {
        throw ValidationError("unknown query topic '" + std::string(query_id) + "'");
    }
    Ranking ranking;
    ranking.query_id = std::string(query_id);
    ranking.k = k;
    for (std::size_t j = 0; j < matrix.size(); ++j) {
        if (static_cast<std::ptrdiff_t>(j) == q) {
            continue;
        }
        ranking.entries.push_back({matrix.topic_ids[j], matrix.values(q, static_cast<Eigen::Index>(j))});
    }
    std::sort(ranking.entries.begin(), ranking.entries.end(),
              [](const Candidate& a, const Candidate& b) {
                  if (a.score != b.score) {
                      return a.score > b.score;
                  }
                  return a.id < b.id;
              });
    if (ranking.entries.size() > k) {
        ranking.entries.resize(k);
    }
    return ranking;
}

std::vector<Ranking> rank_all(const SimilarityMatrix& matrix, std::size_t k) {
    std::vector<Ranking> out;
    out.reserve(matrix.size());
    for (const auto& id : matrix.topic_ids) {
        out.push_back(top_k(matrix, id, k));
    }
    return out;
}

Ranking truncate(const Ranking& ranking, std::size_t k) {
    Ranking out = ranking;
    out.k = k;
    if (out.entries.size() > k) {
        out.entries.resize(k);
    }
    return out;
}

std::string rankings_to_jsonl(std::span<const Ranking> rankings) {
    std::string out;
    for (const auto& r : rankings) {
        nlohmann::ordered_json line;
        line["query"] = r.query_id;
        line["k"] = r.k;
        line["candidates"] = nlohmann::ordered_json::array();
        for (const auto& c : r.entries) {
            nlohmann::ordered_json cand;
            cand["id"] = c.id;
            cand["score"] = c.score;
            line["candidates"].push_back(std::move(cand));
        }
        out += line.dump();
        out += '\n';
    }
    return out;
}

std::vector<Ranking> parse_rankings_jsonl(std::string_view text) {
    std::vector<Ranking> rankings;
    std::size_t line_no = 0;
    for (const auto& raw : io::split(text, '\n')) {
        ++line_no;
        if (io::trim(raw).empty()) {
            continue;
        }
        std::string ctx = "rankings line " + std::to_string(line_no);
        try {
            json line = json::parse(raw);
            Ranking r;
            r.query_id = line.at("query").get<std::string>();
            r.k = line.at("k").get<std::size_t>();
            for (const auto& c : line.at("candidates")) {
                r.entries.push_back({c.at("id").get<std::string>(), c.at("score").get<double>()});
            }
            rankings.push_back(std::move(r));
        } catch (const json::exception& e) {
            throw ValidationError(ctx + ": " + e.what());
        }
    }
    return rankings;
}

std::string matrix_to_csv(const SimilarityMatrix& matrix) {
    std::string out = "id";
    for (const auto& id : matrix.topic_ids) {
        out += ',' + io::csv_escape(id);
    }
    out += '\n';
    for (std::size_t i = 0; i < matrix.size(); ++i) {
        out += io::csv_escape(matrix.topic_ids[i]);
        for (std::size_t j = 0; j < matrix.size(); ++j) {
            out += ',' + io::format_double(matrix.values(static_cast<Eigen::Index>(i),
                                                         static_cast<Eigen::Index>(j)));
        }
        out += '\n';
    }
    return out;
}

}  // namespace boksim::simrank
