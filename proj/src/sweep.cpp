#include "boksim/sweep.hpp"

#include <algorithm>
#include <map>

#include "boksim/error.hpp"
#include "boksim/io.hpp"
#include "boksim/parallel.hpp"
#include "boksim/simrank.hpp"
#include "boksim/textprep.hpp"

namespace boksim::eval {

using kacers::SegmentTreatment;

InputSpec InputSpec::segments(corpus::SegmentSelector selector) {
    InputSpec spec;
    spec.selector = std::move(selector);
    return spec;
}

InputSpec InputSpec::composed(SegmentTreatment main_part, SegmentTreatment abstract_part) {
    InputSpec spec;
    spec.main_part = main_part;
    spec.abstract_part = abstract_part;
    return spec;
}

std::string InputSpec::descriptor() const {
    if (selector) {
        return "segments:" + selector->to_string();
    }
    return "kacers:main=" + main_part.label() + ",abstract=" + abstract_part.label();
}

namespace {

// Scores each (topic, segment) once so every KACERS cell reuses the matrix.
class ComposedTextBuilder {
public:
    ComposedTextBuilder(const corpus::Corpus& corpus, kacers::Scorer& scorer)
        : corpus_(corpus), scorer_(scorer) {}

    std::string build(std::size_t topic_index, SegmentTreatment main_part,
                      SegmentTreatment abstract_part) {
        const auto& topic = corpus_.topics()[topic_index];
        std::string main_text = part(topic_index, topic.main, 0, main_part);
        std::string abstract_text = part(topic_index, topic.abstract_text, 1, abstract_part);
        if (main_text.empty()) {
            return abstract_text;
        }
        if (abstract_text.empty()) {
            return main_text;
        }
        return main_text + " " + abstract_text;
    }

private:
    struct Scored {
        std::vector<std::string> sentences;
        kacers::ScoreMatrix scores;
    };

    std::string part(std::size_t topic_index, const std::string& text, int segment,
                     SegmentTreatment how) {
        using Kind = SegmentTreatment::Kind;
        if (how.kind == Kind::omit) {
            return {};
        }
        if (how.kind == Kind::original) {
            return text;
        }
        const auto& topic = corpus_.topics()[topic_index];
        auto key = std::make_pair(topic_index, segment);
        auto it = cache_.find(key);
        if (it == cache_.end()) {
            if (topic.keywords.empty()) {
                throw ValidationError("topic '" + topic.id + "' has no keywords to summarize with");
            }
            Scored scored;
            scored.sentences = textprep::split_sentences(text);
            if (!scored.sentences.empty()) {
                scored.scores = kacers::score_pairs(scorer_, topic.keywords, scored.sentences);
            }
            it = cache_.emplace(key, std::move(scored)).first;
        }
        if (it->second.sentences.empty()) {
            return {};
        }
        return kacers::summarize_scored(it->second.sentences, it->second.scores, how.t).text;
    }

    const corpus::Corpus& corpus_;
    kacers::Scorer& scorer_;
    std::map<std::pair<std::size_t, int>, Scored> cache_;
};

std::vector<std::string> input_texts(const corpus::Corpus& corpus, const InputSpec& input,
                                     const SweepContext& context,
                                     ComposedTextBuilder* builder) {
    std::vector<std::string> texts;
    texts.reserve(corpus.size());
    if (input.selector) {
        for (const auto& topic : corpus.topics()) {
            texts.push_back(corpus::select_text(topic, *input.selector, context.summaries));
        }
        return texts;
    }
    if (builder == nullptr) {
        throw ValidationError("KACERS inputs need a scorer");
    }
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        texts.push_back(builder->build(i, input.main_part, input.abstract_part));
    }
    return texts;
}

std::vector<simrank::Ranking> rank_texts(const corpus::Corpus& corpus,
                                         const embed::BackendConfig& backend,
                                         const std::vector<std::string>& texts, std::size_t k,
                                         std::size_t jobs) {
    std::vector<std::string> ids;
    ids.reserve(corpus.size());
    for (const auto& topic : corpus.topics()) {
        ids.push_back(topic.id);
    }
    auto run = embed::embed_documents(backend, ids, texts, jobs);
    auto matrix = simrank::pairwise(ids, run.vectors);
    return simrank::rank_all(matrix, k);
}

std::size_t max_k(std::span<const std::size_t> ks) {
    if (ks.empty()) {
        throw ValidationError("evaluation needs at least one k");
    }
    return *std::max_element(ks.begin(), ks.end());
}

}  // namespace

std::vector<simrank::Ranking> rank_corpus(const corpus::Corpus& corpus, const SweepConfig& config,
                                          std::size_t k, const SweepContext& context) {
    std::optional<ComposedTextBuilder> builder;
    if (context.scorer != nullptr) {
        builder.emplace(corpus, *context.scorer);
    }
    auto texts = input_texts(corpus, config.input, context, builder ? &*builder : nullptr);
    return rank_texts(corpus, config.backend, texts, k, context.jobs);
}

std::vector<SweepRow> sweep(const corpus::Corpus& corpus, std::span<const SweepConfig> configs,
                            std::span<const std::size_t> ks, const SweepContext& context) {
    if (configs.empty()) {
        throw ValidationError("sweep needs at least one configuration");
    }
    const std::size_t k = max_k(ks);
    std::optional<ComposedTextBuilder> builder;
    if (context.scorer != nullptr) {
        builder.emplace(corpus, *context.scorer);
    }
    std::vector<SweepRow> rows;
    rows.reserve(configs.size());
    for (const auto& config : configs) {
        auto texts = input_texts(corpus, config.input, context, builder ? &*builder : nullptr);
        auto rankings = rank_texts(corpus, config.backend, texts, k, context.jobs);
        rows.push_back({std::string(embed::backend_name(config.backend.kind)),
                        config.input.descriptor(), evaluate(rankings, corpus, ks)});
    }
    return rows;
}

namespace {

const SegmentTreatment kTable1Axis[] = {SegmentTreatment::omitted(), SegmentTreatment::kacers(1),
                                        SegmentTreatment::kacers(2), SegmentTreatment::kacers(3)};

std::string axis_label(const char* name, SegmentTreatment t) {
    return std::string(name) + "=" +
           (t.kind == SegmentTreatment::Kind::omit ? std::string("omit") : std::to_string(t.t));
}

}  // namespace

std::vector<SweepConfig> table1_configs(const embed::BackendConfig& backend) {
    std::vector<SweepConfig> configs;
    for (auto main_part : kTable1Axis) {
        for (auto abstract_part : kTable1Axis) {
            if (main_part.kind == SegmentTreatment::Kind::omit &&
                abstract_part.kind == SegmentTreatment::Kind::omit) {
                continue;
            }
            configs.push_back({backend, InputSpec::composed(main_part, abstract_part)});
        }
    }
    return configs;
}

std::string table1_to_csv(std::span<const SweepRow> rows, std::size_t k) {
    std::map<std::string, const SweepRow*> by_input;
    for (const auto& row : rows) {
        by_input.emplace(row.input, &row);
    }
    std::string out = io::csv_escape("recall@" + std::to_string(k));
    for (auto abstract_part : kTable1Axis) {
        out += ',' + axis_label("n_abs", abstract_part);
    }
    out += '\n';
    for (auto main_part : kTable1Axis) {
        out += axis_label("n_main", main_part);
        for (auto abstract_part : kTable1Axis) {
            out += ',';
            auto it = by_input.find(InputSpec::composed(main_part, abstract_part).descriptor());
            if (it == by_input.end()) {
                out += '/';
                continue;
            }
            const auto& report = it->second->report;
            auto pos = std::find(report.ks.begin(), report.ks.end(), k);
            if (pos == report.ks.end()) {
                throw ValidationError("sweep report lacks k=" + std::to_string(k));
            }
            out += io::format_double(report.macro[static_cast<std::size_t>(pos - report.ks.begin())].recall);
        }
        out += '\n';
    }
    return out;
}

std::string sweep_to_csv(std::span<const SweepRow> rows) {
    std::string out = "backend,input,k,recall,precision,f,balanced_accuracy,included,skipped\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.report.ks.size(); ++i) {
            const auto& m = row.report.macro[i];
            out += io::csv_escape(row.backend) + ',' + io::csv_escape(row.input) + ',' +
                   std::to_string(row.report.ks[i]) + ',' + io::format_double(m.recall) + ',' +
                   io::format_double(m.precision) + ',' + io::format_double(m.f) + ',' +
                   io::format_double(m.balanced_accuracy) + ',' +
                   std::to_string(row.report.included_query_count) + ',' +
                   std::to_string(row.report.skipped_query_count) + '\n';
        }
    }
    return out;
}

}  // namespace boksim::eval
