#include "boksim/kacers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <json.hpp>

#include "boksim/error.hpp"
#include "boksim/simrank.hpp"

namespace boksim::kacers {

using nlohmann::json;

namespace {

std::set<std::string> token_set(std::string_view text) {
    static const textprep::StopwordSet none;
    auto stream = textprep::tokenize(text, none);
    return {stream.tokens.begin(), stream.tokens.end()};
}

}  // namespace

std::vector<double> LexicalScorer::score_batch(std::span<const TextPair> pairs) {
    std::vector<double> scores;
    scores.reserve(pairs.size());
    for (const auto& [keyword, sentence] : pairs) {
        auto kw = token_set(keyword);
        if (kw.empty()) {
            scores.push_back(0.0);
            continue;
        }
        auto sent = token_set(sentence);
        std::size_t shared = 0;
        for (const auto& tok : kw) {
            shared += sent.count(tok);
        }
        scores.push_back(static_cast<double>(shared) / static_cast<double>(kw.size()));
    }
    return scores;
}

EmbeddingScorer::EmbeddingScorer(std::shared_ptr<const embed::VectorTable> table,
                                 textprep::StopwordSet stopwords)
    : table_(std::move(table)), stopwords_(std::move(stopwords)) {
    if (!table_) {
        throw ValidationError("embedding scorer needs a vector table");
    }
}

std::vector<double> EmbeddingScorer::score_batch(std::span<const TextPair> pairs) {
    std::vector<double> scores;
    scores.reserve(pairs.size());
    for (const auto& [keyword, sentence] : pairs) {
        auto a = embed::embed_avg(*table_, textprep::tokenize(keyword, stopwords_));
        auto b = embed::embed_avg(*table_, textprep::tokenize(sentence, stopwords_));
        scores.push_back(simrank::cosine(a, b));
    }
    return scores;
}

ScoreMatrix score_pairs(Scorer& scorer, std::span<const std::string> keywords,
                        std::span<const std::string> sentences) {
    if (keywords.empty()) {
        throw ValidationError("scoring needs at least one keyword");
    }
    if (sentences.empty()) {
        throw ValidationError("scoring needs at least one sentence");
    }
    std::vector<TextPair> pairs;
    pairs.reserve(keywords.size() * sentences.size());
    for (const auto& kw : keywords) {
        for (const auto& s : sentences) {
            pairs.emplace_back(kw, s);
        }
    }
    std::vector<double> flat;
    try {
        flat = scorer.score_batch(pairs);
    } catch (const Error& e) {
        throw Error("scorer '" + scorer.id() + "' failed on " + std::to_string(pairs.size()) +
                    " pairs (first keyword '" + keywords.front() + "'): " + e.what());
    }
    if (flat.size() != pairs.size()) {
        throw Error("scorer '" + scorer.id() + "' returned " + std::to_string(flat.size()) +
                    " scores for " + std::to_string(pairs.size()) + " pairs");
    }
    ScoreMatrix matrix(keywords.size(), std::vector<double>(sentences.size()));
    for (std::size_t i = 0; i < keywords.size(); ++i) {
        for (std::size_t j = 0; j < sentences.size(); ++j) {
            double v = flat[i * sentences.size() + j];
            if (!std::isfinite(v)) {
                throw Error("scorer '" + scorer.id() + "' gave a non-finite score for keyword '" +
                            keywords[i] + "' and sentence " + std::to_string(j));
            }
            matrix[i][j] = v;
        }
    }
    return matrix;
}

std::vector<std::size_t> top_t(std::span<const double> row, std::size_t t) {
    std::vector<std::size_t> idx(row.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return row[a] > row[b]; });
    if (idx.size() > t) {
        idx.resize(t);
    }
    return idx;
}

Summary summarize_scored(std::vector<std::string> sentences, const ScoreMatrix& scores,
                         std::size_t t) {
    if (t < 1) {
        throw ValidationError("KACERS needs t >= 1");
    }
    Summary summary;
    summary.t = t;
    summary.sentences = std::move(sentences);
    std::vector<bool> used(summary.sentences.size(), false);
    for (const auto& row : scores) {
        if (row.size() != summary.sentences.size()) {
            throw Error("score matrix row length differs from sentence count");
        }
        auto picked = top_t(row, t);
        for (auto j : picked) {
            if (!used[j]) {
                used[j] = true;
                summary.order.push_back(j);
            }
        }
        summary.per_keyword.push_back(std::move(picked));
    }
    for (auto j : summary.order) {
        if (!summary.text.empty()) {
            summary.text += ' ';
        }
        summary.text += summary.sentences[j];
    }
    return summary;
}

Summary summarize(std::string_view text, std::span<const std::string> keywords, std::size_t t,
                  Scorer& scorer) {
    if (t < 1) {
        throw ValidationError("KACERS needs t >= 1");
    }
    if (keywords.empty()) {
        throw ValidationError("KACERS needs at least one keyword");
    }
    auto sentences = textprep::split_sentences(text);
    if (sentences.empty()) {
        throw ValidationError("KACERS input has no sentences");
    }
    auto scores = score_pairs(scorer, keywords, sentences);
    return summarize_scored(std::move(sentences), scores, t);
}

std::string SegmentTreatment::label() const {
    switch (kind) {
        case Kind::omit: return "omit";
        case Kind::original: return "original";
        case Kind::summarized: return "kacers-" + std::to_string(t);
    }
    return "?";
}

namespace {

std::string treat(const corpus::Topic& topic, std::string_view segment, SegmentTreatment how,
                  Scorer& scorer) {
    switch (how.kind) {
        case SegmentTreatment::Kind::omit: return {};
        case SegmentTreatment::Kind::original: return std::string(segment);
        case SegmentTreatment::Kind::summarized: break;
    }
    if (topic.keywords.empty()) {
        throw ValidationError("topic '" + topic.id + "' has no keywords to summarize with");
    }
    if (textprep::split_sentences(segment).empty()) {
        return {};
    }
    return summarize(segment, topic.keywords, how.t, scorer).text;
}

}  // namespace

std::string compose_summary(const corpus::Topic& topic, SegmentTreatment main_part,
                            SegmentTreatment abstract_part, Scorer& scorer) {
    std::string main_text = treat(topic, topic.main, main_part, scorer);
    std::string abstract_text = treat(topic, topic.abstract_text, abstract_part, scorer);
    if (main_text.empty()) {
        return abstract_text;
    }
    if (abstract_text.empty()) {
        return main_text;
    }
    return main_text + " " + abstract_text;
}

std::string build_semantic_summary(const corpus::Topic& topic, std::optional<std::size_t> n_main,
                                   std::optional<std::size_t> n_abs, Scorer& scorer) {
    return compose_summary(topic, SegmentTreatment::from_optional(n_main),
                           SegmentTreatment::from_optional(n_abs), scorer);
}

std::string summary_cache_to_json(const SummaryCache& cache) {
    nlohmann::ordered_json out = nlohmann::ordered_json::object();
    for (const auto& [id, entry] : cache) {
        nlohmann::ordered_json item;
        item["text"] = entry.text;
        item["n_main"] = entry.n_main ? nlohmann::ordered_json(*entry.n_main) : nullptr;
        item["n_abs"] = entry.n_abs ? nlohmann::ordered_json(*entry.n_abs) : nullptr;
        item["scorer_id"] = entry.scorer_id;
        out[id] = std::move(item);
    }
    return out.dump(2) + "\n";
}

SummaryCache parse_summary_cache(std::string_view text) {
    SummaryCache cache;
    try {
        json doc = json::parse(text.begin(), text.end());
        if (!doc.is_object()) {
            throw ValidationError("summary cache must be a JSON object");
        }
        for (const auto& [id, item] : doc.items()) {
            CachedSummary entry;
            entry.text = item.at("text").get<std::string>();
            if (!item.at("n_main").is_null()) {
                entry.n_main = item.at("n_main").get<std::size_t>();
            }
            if (!item.at("n_abs").is_null()) {
                entry.n_abs = item.at("n_abs").get<std::size_t>();
            }
            entry.scorer_id = item.at("scorer_id").get<std::string>();
            cache.emplace(id, std::move(entry));
        }
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed summary cache: ") + e.what());
    }
    return cache;
}

corpus::SummaryMap summary_texts(const SummaryCache& cache) {
    corpus::SummaryMap out;
    for (const auto& [id, entry] : cache) {
        out.emplace(id, entry.text);
    }
    return out;
}

}  // namespace boksim::kacers
