#include <doctest.h>

#include "boksim/corpus.hpp"
#include "boksim/error.hpp"
#include "boksim/io.hpp"
#include "test_support.hpp"

using namespace boksim;
using namespace boksim::corpus;
using testsupport::fixture;

TEST_CASE("minimal single-topic corpus") {
    auto c = load_corpus(fixture("min.json"));
    CHECK(c.size() == 1);
    CHECK(c.ka_codes() == std::set<std::string>{"FC"});
    CHECK(c.topics()[0].knowledge_area == "FC");
}

TEST_CASE("GS-14 fixture has two related topics") {
    auto c = load_corpus(fixture("gs14.json"));
    const auto* t = c.find("GS-14");
    REQUIRE(t != nullptr);
    CHECK(t->title == "GIS and Critical Ethics");
    CHECK(t->related == std::vector<std::string>{"GS-13", "GS-15"});
    CHECK(c.size() == 13);
}

TEST_CASE("duplicate ids are rejected") {
    CHECK_THROWS_AS(load_corpus(fixture("dup.json")), ValidationError);
}

TEST_CASE("topics are ordered by id regardless of file order") {
    auto c = parse_corpus(R"({"topics":[{"id":"GS-02"},{"id":"AM-10"},{"id":"AM-02"}]})");
    CHECK(c.topics()[0].id == "AM-02");
    CHECK(c.topics()[1].id == "AM-10");
    CHECK(c.topics()[2].id == "GS-02");
    CHECK(*c.index_of("GS-02") == 2);
    CHECK_FALSE(c.index_of("XX-01").has_value());
    CHECK(c.find("XX-01") == nullptr);
}

TEST_CASE("strict mode rejects dangling, self and repeated related ids") {
    CHECK_THROWS_AS(parse_corpus(R"({"topics":[{"id":"A-1","related":["B-9"]}]})"), ValidationError);
    CHECK_THROWS_AS(parse_corpus(R"({"topics":[{"id":"A-1","related":["A-1"]}]})"), ValidationError);
    CHECK_THROWS_AS(
        parse_corpus(R"({"topics":[{"id":"A-1","related":["A-2","A-2"]},{"id":"A-2"}]})"),
        ValidationError);
}

TEST_CASE("lenient mode drops bad related ids and unknown keys with a report") {
    auto text = R"({"version":3,"topics":[{"id":"A-1","extra":1,"related":["B-9","A-2","A-1"]},{"id":"A-2"}]})";
    CHECK_THROWS_AS(parse_corpus(text, LoadMode::strict), ValidationError);
    auto c = parse_corpus(text, LoadMode::lenient);
    CHECK(c.find("A-1")->related == std::vector<std::string>{"A-2"});
    CHECK(c.load_report().dropped_related == 2);
    CHECK(c.load_report().ignored_keys == 2);
    CHECK(c.load_report().warnings() == 4);
}

TEST_CASE("schema errors") {
    CHECK_THROWS_AS(parse_corpus("not json"), ValidationError);
    CHECK_THROWS_AS(parse_corpus(R"({"items":[]})"), ValidationError);
    CHECK_THROWS_AS(parse_corpus(R"({"topics":[{"title":"no id"}]})"), ValidationError);
    CHECK_THROWS_AS(parse_corpus(R"({"topics":[{"id":"NODASH"}]})"), ValidationError);
    CHECK_THROWS_AS(parse_corpus(R"({"topics":[{"id":"A-1","keywords":"x"}]})"), ValidationError);
    CHECK_THROWS_AS(parse_corpus(R"({"topics":[{"id":"A-1","title":5}]})"), ValidationError);
}

TEST_CASE("knowledge_area_of") {
    CHECK(knowledge_area_of("GS-14") == "GS");
    CHECK_THROWS_AS(knowledge_area_of("-14"), ValidationError);
    CHECK_THROWS_AS(knowledge_area_of("GS-"), ValidationError);
}

TEST_CASE("corpus JSON round-trip") {
    auto c = load_corpus(fixture("mini_bok.json"));
    auto again = parse_corpus(corpus_to_json(c));
    CHECK(again == c);
    CHECK(corpus_to_json(again) == corpus_to_json(c));
}

TEST_CASE("segment selection") {
    Topic t;
    t.id = "GS-14";
    t.title = "Web GIS";
    t.keywords = {"ethics", "critical GIS"};
    t.abstract_text = "Abs.";
    t.main = "Main text.";
    t.learning_objectives = {"Do a.", "Do b."};
    t.assessment_questions = {"Why?"};
    CHECK(select_text(t, SegmentSelector::parse("title")) == "Web GIS");
    CHECK(select_text(t, SegmentSelector::parse("title,keyword")) == "Web GIS ethics. critical GIS");
    CHECK(select_text(t, SegmentSelector::parse("abstract,main")) == "Abs. Main text.");
    CHECK(select_text(t, SegmentSelector::parse("main, abstract")) == "Main text. Abs.");
    CHECK(select_text(t, SegmentSelector::parse("learnobj,iaq")) == "Do a. Do b. Why?");

    Topic empty;
    empty.id = "GS-15";
    empty.title = "Only title";
    CHECK(select_text(empty, SegmentSelector::parse("abstract,title,main")) == "Only title");
}

TEST_CASE("semantic_summary segment needs a summary") {
    Topic t;
    t.id = "GS-14";
    t.title = "T";
    auto sel = SegmentSelector::parse("title,semantic_summary");
    CHECK_THROWS_AS(select_text(t, sel), ValidationError);
    SummaryMap m{{"GS-14", "summary text"}};
    CHECK(select_text(t, sel, &m) == "T summary text");
}

TEST_CASE("selector parsing") {
    CHECK(SegmentSelector::parse("title,keyword").to_string() == "title,keyword");
    CHECK_THROWS_AS(SegmentSelector::parse(""), ValidationError);
    CHECK_THROWS_AS(SegmentSelector::parse("title,title"), ValidationError);
    CHECK_THROWS_AS(SegmentSelector::parse("body"), ValidationError);
    for (auto s : {Segment::title, Segment::keyword, Segment::abstract_text, Segment::main,
                   Segment::learnobj, Segment::iaq, Segment::semantic_summary}) {
        CHECK(segment_from_name(segment_name(s)) == s);
    }
}

TEST_CASE("corpus statistics") {
    auto one = corpus_stats(load_corpus(fixture("min.json")));
    CHECK(one.mean_related == 0.0);
    CHECK(one.empty_related == 1);

    auto five = corpus_stats(parse_corpus(R"({"topics":[
        {"id":"A-1","related":["A-2","A-3"]},
        {"id":"A-2","related":["A-1","A-3","A-4"]},
        {"id":"A-3","related":["A-1","A-2","A-4","A-5"]},
        {"id":"A-4","related":["A-1","A-2","A-3"]},
        {"id":"A-5","related":["A-1","A-2","A-4"]}]})"));
    CHECK(five.mean_related == 3.0);
    CHECK(five.min_related == 2);
    CHECK(five.max_related == 4);
    CHECK(five.empty_related == 0);
    CHECK(five.per_ka.at("A") == 5);

    auto gs = corpus_stats(load_corpus(fixture("gs14.json")));
    CHECK(gs.per_ka.at("GS") == 6);
    CHECK(format_stats(gs).find("topics: 13") != std::string::npos);
}
