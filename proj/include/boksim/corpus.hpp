#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace boksim::corpus {

// One body-of-knowledge entry. `related` holds the human-labeled related
// topics used as ground truth when evaluating rankings.
struct Topic {
    std::string id;
    std::string knowledge_area;
    std::string title;
    std::vector<std::string> keywords;
    std::string abstract_text;
    std::string main;
    std::vector<std::string> learning_objectives;
    std::vector<std::string> assessment_questions;
    std::vector<std::string> related;

    bool operator==(const Topic&) const = default;
};

enum class LoadMode { strict, lenient };

struct LoadReport {
    std::size_t dropped_related = 0;  // dangling, self or duplicate entries removed
    std::size_t ignored_keys = 0;     // unknown keys skipped in lenient mode

    std::size_t warnings() const { return dropped_related + ignored_keys; }
    bool operator==(const LoadReport&) const = default;
};

// Immutable, id-ordered collection of topics.
class Corpus {
public:
    Corpus() = default;

    // Validates and sorts. Throws ValidationError on duplicate ids, malformed
    // ids, and (strict mode) related ids that do not resolve.
    static Corpus from_topics(std::vector<Topic> topics, LoadMode mode = LoadMode::strict,
                              LoadReport report = {});

    const std::vector<Topic>& topics() const { return topics_; }
    const std::set<std::string>& ka_codes() const { return ka_codes_; }
    const LoadReport& load_report() const { return report_; }
    std::size_t size() const { return topics_.size(); }

    const Topic* find(std::string_view id) const;
    std::optional<std::size_t> index_of(std::string_view id) const;

    // Topics are compared by content; the load report is not part of equality.
    bool operator==(const Corpus& other) const { return topics_ == other.topics_; }

private:
    std::vector<Topic> topics_;
    std::set<std::string> ka_codes_;
    LoadReport report_;
};

// Knowledge-area code of an id ("GS-14" -> "GS"). Throws ValidationError when
// the id is not of the form <KA>-<rest>.
std::string knowledge_area_of(std::string_view id);

Corpus parse_corpus(std::string_view json_text, LoadMode mode = LoadMode::strict);
Corpus load_corpus(const std::filesystem::path& path, LoadMode mode = LoadMode::strict);
std::string corpus_to_json(const Corpus& corpus);

enum class Segment { title, keyword, abstract_text, main, learnobj, iaq, semantic_summary };

std::string_view segment_name(Segment segment);
std::optional<Segment> segment_from_name(std::string_view name);

class SegmentSelector {
public:
    explicit SegmentSelector(std::vector<Segment> parts);

    // Comma-separated names, e.g. "title,keyword,abstract".
    static SegmentSelector parse(std::string_view text);

    const std::vector<Segment>& parts() const { return parts_; }
    bool contains(Segment segment) const;
    std::string to_string() const;

    bool operator==(const SegmentSelector&) const = default;

private:
    std::vector<Segment> parts_;
};

using SummaryMap = std::map<std::string, std::string, std::less<>>;

// Concatenates the selected segments in selector order with single spaces.
// Empty segments contribute nothing.
std::string select_text(const Topic& topic, const SegmentSelector& selector,
                        const SummaryMap* summaries = nullptr);

struct CorpusStats {
    std::size_t topic_count = 0;
    std::map<std::string, std::size_t> per_ka;
    double mean_related = 0.0;
    std::size_t min_related = 0;
    std::size_t max_related = 0;
    std::size_t empty_related = 0;
};

CorpusStats corpus_stats(const Corpus& corpus);
std::string format_stats(const CorpusStats& stats);
std::string stats_to_json(const CorpusStats& stats);

}  // namespace boksim::corpus
