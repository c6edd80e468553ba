#include <doctest.h>

#include "boksim/error.hpp"
#include "boksim/io.hpp"
#include "boksim/sweep.hpp"
#include "test_support.hpp"

using namespace boksim;
using namespace boksim::eval;

TEST_CASE("single configuration equals a direct evaluation") {
    auto corpus = testsupport::cluster_corpus();
    std::vector<SweepConfig> configs = {{embed::BackendConfig{}, InputSpec::segments(corpus::SegmentSelector::parse("title,abstract"))}};
    std::vector<std::size_t> ks = {1, 4, 8};
    SweepContext ctx;
    auto rows = sweep(corpus, configs, ks, ctx);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].backend == "tfidf");
    CHECK(rows[0].input == "segments:title,abstract");
    auto rankings = rank_corpus(corpus, configs[0], 8, ctx);
    auto direct = evaluate(rankings, corpus, ks);
    CHECK(rows[0].report.macro == direct.macro);
    CHECK(rows[0].report.macro[1].recall >= 0.95);
}

TEST_CASE("table1 grid has 15 configurations and the undefined cell") {
    auto configs = table1_configs(embed::BackendConfig{});
    CHECK(configs.size() == 15);
    CHECK(configs.front().input.descriptor() == "kacers:main=omit,abstract=kacers-1");
    CHECK(configs.back().input.descriptor() == "kacers:main=kacers-3,abstract=kacers-3");

    auto corpus = corpus::load_corpus(testsupport::fixture("mini_bok.json"));
    kacers::LexicalScorer lex;
    SweepContext ctx;
    ctx.scorer = &lex;
    std::vector<std::size_t> ks = {2};
    auto rows = sweep(corpus, configs, ks, ctx);
    auto csv = table1_to_csv(rows, 2);
    auto lines = io::split(csv, '\n');
    REQUIRE(lines.size() == 6);
    CHECK(lines[0] == "recall@2,n_abs=omit,n_abs=1,n_abs=2,n_abs=3");
    CHECK(lines[1].starts_with("n_main=omit,/,"));
    CHECK(lines[4].starts_with("n_main=3,"));
    std::size_t numeric = 0, slashes = 0;
    for (std::size_t i = 1; i <= 4; ++i) {
        auto cells = io::csv_parse_line(lines[i]);
        REQUIRE(cells.size() == 5);
        for (std::size_t c = 1; c < 5; ++c) {
            if (cells[c] == "/") ++slashes;
            else {
                double v = io::parse_double(cells[c], "cell");
                CHECK(v >= 0.0);
                CHECK(v <= 1.0);
                ++numeric;
            }
        }
    }
    CHECK(numeric == 15);
    CHECK(slashes == 1);
    CHECK_THROWS_AS(table1_to_csv(rows, 9), ValidationError);
}

TEST_CASE("composed inputs need a scorer and summaries need a map") {
    auto corpus = corpus::load_corpus(testsupport::fixture("mini_bok.json"));
    std::vector<std::size_t> ks = {1};
    std::vector<SweepConfig> composed = {{embed::BackendConfig{}, InputSpec::composed(kacers::SegmentTreatment::kacers(1), kacers::SegmentTreatment::omitted())}};
    CHECK_THROWS_AS(sweep(corpus, composed, ks, SweepContext{}), ValidationError);
    std::vector<SweepConfig> summary = {{embed::BackendConfig{}, InputSpec::segments(corpus::SegmentSelector::parse("semantic_summary"))}};
    CHECK_THROWS_AS(sweep(corpus, summary, ks, SweepContext{}), ValidationError);
}

TEST_CASE("sweep long form csv") {
    auto corpus = testsupport::cluster_corpus();
    std::vector<SweepConfig> configs = {
        {embed::BackendConfig{}, InputSpec::segments(corpus::SegmentSelector::parse("title"))},
        {embed::BackendConfig{}, InputSpec::segments(corpus::SegmentSelector::parse("abstract"))}};
    std::vector<std::size_t> ks = {1, 2};
    auto csv = sweep_to_csv(sweep(corpus, configs, ks, SweepContext{}));
    auto lines = io::split(csv, '\n');
    CHECK(lines[0] == "backend,input,k,recall,precision,f,balanced_accuracy,included,skipped");
    CHECK(lines.size() == 1 + 4 + 1);
}

TEST_CASE("full text beats uninformative titles on the cluster corpus") {
    auto base = testsupport::cluster_corpus();
    const std::vector<std::string> names = {"alpha", "beta", "gamma", "delta", "epsilon"};
    std::vector<corpus::Topic> topics = base.topics();
    for (auto& t : topics) t.title = "chapter " + names[static_cast<std::size_t>(t.id.back() - '1')];
    auto corpus = corpus::Corpus::from_topics(topics);
    std::vector<SweepConfig> configs = {
        {embed::BackendConfig{}, InputSpec::segments(corpus::SegmentSelector::parse("title"))},
        {embed::BackendConfig{}, InputSpec::segments(corpus::SegmentSelector::parse("title,abstract"))}};
    std::vector<std::size_t> ks = {4};
    auto rows = sweep(corpus, configs, ks, SweepContext{});
    CHECK(rows[1].report.macro[0].recall > rows[0].report.macro[0].recall);
}
