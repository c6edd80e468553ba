#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "boksim/backend.hpp"
#include "boksim/corpus.hpp"
#include "boksim/evalmetrics.hpp"
#include "boksim/kacers.hpp"

namespace boksim::eval {

// The text each topic contributes to one configuration: either a segment
// combination or a KACERS composition of Main and Abstract.
struct InputSpec {
    std::optional<corpus::SegmentSelector> selector;
    kacers::SegmentTreatment main_part;
    kacers::SegmentTreatment abstract_part;

    static InputSpec segments(corpus::SegmentSelector selector);
    static InputSpec composed(kacers::SegmentTreatment main_part,
                              kacers::SegmentTreatment abstract_part);

    // "segments:title,abstract" or "kacers:main=kacers-3,abstract=kacers-2".
    std::string descriptor() const;
};

struct SweepConfig {
    embed::BackendConfig backend;
    InputSpec input;
};

struct SweepRow {
    std::string backend;
    std::string input;
    MetricsReport report;
};

struct SweepContext {
    kacers::Scorer* scorer = nullptr;              // needed by composed inputs
    const corpus::SummaryMap* summaries = nullptr;  // needed by semantic_summary segments
    std::size_t jobs = 1;
};

// Embeds, ranks and evaluates the corpus once per configuration.
std::vector<SweepRow> sweep(const corpus::Corpus& corpus, std::span<const SweepConfig> configs,
                            std::span<const std::size_t> ks, const SweepContext& context);

// Rankings of every topic for one configuration, truncated at k.
std::vector<simrank::Ranking> rank_corpus(const corpus::Corpus& corpus, const SweepConfig& config,
                                          std::size_t k, const SweepContext& context);

// The Main x Abstract grid: rows main in {omit, KACERS-1..3}, columns abstract
// in {omit, KACERS-1..3}; the omit x omit cell has no text and is left out,
// giving 15 configurations in row-major order.
std::vector<SweepConfig> table1_configs(const embed::BackendConfig& backend);

// Grid CSV of macro recall@k with "n_main=..." rows and "n_abs=..." columns;
// the missing cell is written as "/".
std::string table1_to_csv(std::span<const SweepRow> rows, std::size_t k);

// Long form: backend,input,k,recall,precision,f,balanced_accuracy,included,skipped.
std::string sweep_to_csv(std::span<const SweepRow> rows);

}  // namespace boksim::eval
