#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "boksim/corpus.hpp"
#include "boksim/embed.hpp"
#include "boksim/provider.hpp"
#include "boksim/textprep.hpp"

namespace boksim::kacers {

using provider::TextPair;

// Scores (keyword, sentence) pairs; higher means more related. Implementations
// must be deterministic for a fixed underlying model.
class Scorer {
public:
    virtual ~Scorer() = default;
    virtual std::string id() const = 0;
    virtual std::vector<double> score_batch(std::span<const TextPair> pairs) = 0;
};

// |shared distinct tokens| / |distinct keyword tokens|, no stopword removal.
class LexicalScorer final : public Scorer {
public:
    std::string id() const override { return "lexical"; }
    std::vector<double> score_batch(std::span<const TextPair> pairs) override;
};

// Cosine of the mean word vectors of keyword and sentence.
class EmbeddingScorer final : public Scorer {
public:
    explicit EmbeddingScorer(std::shared_ptr<const embed::VectorTable> table,
                             textprep::StopwordSet stopwords = textprep::default_stopwords());
    std::string id() const override { return "embedding"; }
    std::vector<double> score_batch(std::span<const TextPair> pairs) override;

private:
    std::shared_ptr<const embed::VectorTable> table_;
    textprep::StopwordSet stopwords_;
};

// Delegates to a cross-encoder behind the provider protocol.
class ExternalScorer final : public Scorer {
public:
    explicit ExternalScorer(provider::ProviderClient& client) : client_(client) {}
    std::string id() const override { return "external"; }
    std::vector<double> score_batch(std::span<const TextPair> pairs) override {
        return client_.score(pairs);
    }

private:
    provider::ProviderClient& client_;
};

// Row i, column j = score(keywords[i], sentences[j]).
using ScoreMatrix = std::vector<std::vector<double>>;

ScoreMatrix score_pairs(Scorer& scorer, std::span<const std::string> keywords,
                        std::span<const std::string> sentences);

struct Summary {
    std::size_t t = 0;
    std::vector<std::string> sentences;               // split input
    std::vector<std::vector<std::size_t>> per_keyword;  // selected indices, best first
    std::vector<std::size_t> order;                    // deduplicated assembly order
    std::string text;
};

// Indices of the t best entries of one score row, best first; equal scores
// prefer the lower index.
std::vector<std::size_t> top_t(std::span<const double> row, std::size_t t);

// Keyword-aware summary: per keyword the top-t sentences, concatenated
// keyword-major and best-first, keeping only the first occurrence of a sentence.
Summary summarize(std::string_view text, std::span<const std::string> keywords, std::size_t t,
                  Scorer& scorer);

// Same, on an already split text and a precomputed score matrix.
Summary summarize_scored(std::vector<std::string> sentences, const ScoreMatrix& scores,
                         std::size_t t);

// How one segment enters a composed summary.
struct SegmentTreatment {
    enum class Kind { omit, original, summarized };
    Kind kind = Kind::original;
    std::size_t t = 0;

    static SegmentTreatment omitted() { return {Kind::omit, 0}; }
    static SegmentTreatment verbatim() { return {Kind::original, 0}; }
    static SegmentTreatment kacers(std::size_t t) { return {Kind::summarized, t}; }
    static SegmentTreatment from_optional(std::optional<std::size_t> t) {
        return t ? kacers(*t) : verbatim();
    }
    std::string label() const;  // "omit", "original", "kacers-<t>"
    bool operator==(const SegmentTreatment&) const = default;
};

// Main part first, then abstract part, joined by a single space (empty parts
// are skipped). A segment without sentences contributes nothing.
std::string compose_summary(const corpus::Topic& topic, SegmentTreatment main_part,
                            SegmentTreatment abstract_part, Scorer& scorer);

inline constexpr std::size_t kSemanticSummaryMainT = 3;
inline constexpr std::size_t kSemanticSummaryAbstractT = 2;

// nullopt keeps the segment verbatim. n_main = 3, n_abs = 2 is the
// "Semantic Summary" combination.
std::string build_semantic_summary(const corpus::Topic& topic, std::optional<std::size_t> n_main,
                                   std::optional<std::size_t> n_abs, Scorer& scorer);

// Summary cache file: {"<topic id>": {"text", "n_main", "n_abs", "scorer_id"}}.
struct CachedSummary {
    std::string text;
    std::optional<std::size_t> n_main;
    std::optional<std::size_t> n_abs;
    std::string scorer_id;

    bool operator==(const CachedSummary&) const = default;
};

using SummaryCache = std::map<std::string, CachedSummary, std::less<>>;

std::string summary_cache_to_json(const SummaryCache& cache);
SummaryCache parse_summary_cache(std::string_view text);
corpus::SummaryMap summary_texts(const SummaryCache& cache);

}  // namespace boksim::kacers
