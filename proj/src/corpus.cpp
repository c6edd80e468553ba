#include "boksim/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include <json.hpp>

#include "boksim/error.hpp"
#include "boksim/io.hpp"

namespace boksim::corpus {

using nlohmann::json;

namespace {

constexpr std::string_view kKnownKeys[] = {
    "id",   "title", "keywords", "abstract", "main", "learning_objectives", "assessment_questions",
    "related"};

bool is_known_key(std::string_view key) {
    return std::find(std::begin(kKnownKeys), std::end(kKnownKeys), key) != std::end(kKnownKeys);
}

std::string read_string(const json& obj, const char* key, std::string_view topic_ctx) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
        return {};
    }
    if (!it->is_string()) {
        throw ValidationError(std::string(topic_ctx) + ": key '" + key + "' must be a string");
    }
    return it->get<std::string>();
}

std::vector<std::string> read_string_list(const json& obj, const char* key,
                                          std::string_view topic_ctx) {
    std::vector<std::string> out;
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
        return out;
    }
    if (!it->is_array()) {
        throw ValidationError(std::string(topic_ctx) + ": key '" + key +
                              "' must be an array of strings");
    }
    for (const auto& item : *it) {
        if (!item.is_string()) {
            throw ValidationError(std::string(topic_ctx) + ": key '" + key +
                                  "' must be an array of strings");
        }
        out.push_back(item.get<std::string>());
    }
    return out;
}

void append_part(std::string& out, std::string_view part) {
    if (part.empty()) {
        return;
    }
    if (!out.empty()) {
        out += ' ';
    }
    out += part;
}

std::string join(const std::vector<std::string>& items, std::string_view sep) {
    std::string out;
    for (const auto& item : items) {
        if (item.empty()) {
            continue;
        }
        if (!out.empty()) {
            out += sep;
        }
        out += item;
    }
    return out;
}

}  // namespace

std::string knowledge_area_of(std::string_view id) {
    auto dash = id.find('-');
    if (id.empty() || dash == std::string_view::npos || dash == 0 || dash + 1 == id.size()) {
        throw ValidationError("malformed topic id '" + std::string(id) +
                              "' (expected <KA>-<number>)");
    }
    return std::string(id.substr(0, dash));
}

Corpus Corpus::from_topics(std::vector<Topic> topics, LoadMode mode, LoadReport report) {
    Corpus corpus;
    for (auto& topic : topics) {
        topic.knowledge_area = knowledge_area_of(topic.id);
    }
    std::sort(topics.begin(), topics.end(),
              [](const Topic& a, const Topic& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < topics.size(); ++i) {
        if (topics[i].id == topics[i - 1].id) {
            throw ValidationError("duplicate topic id '" + topics[i].id + "'");
        }
    }
    std::set<std::string, std::less<>> ids;
    for (const auto& topic : topics) {
        ids.insert(topic.id);
    }
    auto exists = [&](const std::string& id) { return ids.count(id) != 0; };
    for (auto& topic : topics) {
        std::vector<std::string> kept;
        std::set<std::string> seen;
        for (auto& rel : topic.related) {
            std::string problem;
            if (rel == topic.id) {
                problem = "references itself";
            } else if (seen.count(rel) != 0) {
                problem = "lists related id '" + rel + "' twice";
            } else if (!exists(rel)) {
                problem = "has dangling related id '" + rel + "'";
            }
            if (problem.empty()) {
                seen.insert(rel);
                kept.push_back(std::move(rel));
            } else if (mode == LoadMode::strict) {
                throw ValidationError("topic '" + topic.id + "' " + problem);
            } else {
                ++report.dropped_related;
            }
        }
        topic.related = std::move(kept);
        corpus.ka_codes_.insert(topic.knowledge_area);
    }
    corpus.topics_ = std::move(topics);
    corpus.report_ = report;
    return corpus;
}

const Topic* Corpus::find(std::string_view id) const {
    auto idx = index_of(id);
    return idx ? &topics_[*idx] : nullptr;
}

std::optional<std::size_t> Corpus::index_of(std::string_view id) const {
    auto it = std::lower_bound(topics_.begin(), topics_.end(), id,
                               [](const Topic& t, std::string_view key) { return t.id < key; });
    if (it == topics_.end() || it->id != id) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - topics_.begin());
}

Corpus parse_corpus(std::string_view json_text, LoadMode mode) {
    json doc;
    try {
        doc = json::parse(json_text.begin(), json_text.end());
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("corpus is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("topics") || !doc["topics"].is_array()) {
        throw ValidationError("corpus must be an object with a 'topics' array");
    }
    LoadReport report;
    for (const auto& [key, value] : doc.items()) {
        if (key != "topics") {
            if (mode == LoadMode::strict) {
                throw ValidationError("unknown top-level key '" + key + "'");
            }
            ++report.ignored_keys;
        }
    }
    std::vector<Topic> topics;
    std::size_t index = 0;
    for (const auto& item : doc["topics"]) {
        std::string ctx = "topics[" + std::to_string(index++) + "]";
        if (!item.is_object()) {
            throw ValidationError(ctx + ": must be an object");
        }
        auto id_it = item.find("id");
        if (id_it == item.end() || !id_it->is_string() || id_it->get<std::string>().empty()) {
            throw ValidationError(ctx + ": missing or empty string 'id'");
        }
        Topic topic;
        topic.id = id_it->get<std::string>();
        ctx += " (" + topic.id + ")";
        for (const auto& [key, value] : item.items()) {
            if (!is_known_key(key)) {
                if (mode == LoadMode::strict) {
                    throw ValidationError(ctx + ": unknown key '" + key + "'");
                }
                ++report.ignored_keys;
            }
        }
        topic.title = read_string(item, "title", ctx);
        topic.keywords = read_string_list(item, "keywords", ctx);
        topic.abstract_text = read_string(item, "abstract", ctx);
        topic.main = read_string(item, "main", ctx);
        topic.learning_objectives = read_string_list(item, "learning_objectives", ctx);
        topic.assessment_questions = read_string_list(item, "assessment_questions", ctx);
        topic.related = read_string_list(item, "related", ctx);
        topics.push_back(std::move(topic));
    }
    return Corpus::from_topics(std::move(topics), mode, report);
}

Corpus load_corpus(const std::filesystem::path& path, LoadMode mode) {
    std::string text;
    try {
        text = io::read_file(path);
    } catch (const Error&) {
        throw ValidationError("cannot read corpus file: " + path.string());
    }
    try {
        return parse_corpus(text, mode);
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

std::string corpus_to_json(const Corpus& corpus) {
    nlohmann::ordered_json out;
    out["topics"] = nlohmann::ordered_json::array();
    for (const auto& t : corpus.topics()) {
        nlohmann::ordered_json obj;
        obj["id"] = t.id;
        obj["title"] = t.title;
        obj["keywords"] = t.keywords;
        obj["abstract"] = t.abstract_text;
        obj["main"] = t.main;
        obj["learning_objectives"] = t.learning_objectives;
        obj["assessment_questions"] = t.assessment_questions;
        obj["related"] = t.related;
        out["topics"].push_back(std::move(obj));
    }
    return out.dump(2) + "\n";
}

std::string_view segment_name(Segment segment) {
    switch (segment) {
        case Segment::title: return "title";
        case Segment::keyword: return "keyword";
        case Segment::abstract_text: return "abstract";
        case Segment::main: return "main";
        case Segment::learnobj: return "learnobj";
        case Segment::iaq: return "iaq";
        case Segment::semantic_summary: return "semantic_summary";
    }
    return "?";
}

std::optional<Segment> segment_from_name(std::string_view name) {
    for (auto s : {Segment::title, Segment::keyword, Segment::abstract_text, Segment::main,
                   Segment::learnobj, Segment::iaq, Segment::semantic_summary}) {
        if (segment_name(s) == name) {
            return s;
        }
    }
    return std::nullopt;
}

SegmentSelector::SegmentSelector(std::vector<Segment> parts) : parts_(std::move(parts)) {
    if (parts_.empty()) {
        throw ValidationError("segment selector must name at least one segment");
    }
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        for (std::size_t j = i + 1; j < parts_.size(); ++j) {
            if (parts_[i] == parts_[j]) {
                throw ValidationError("segment '" + std::string(segment_name(parts_[i])) +
                                      "' selected twice");
            }
        }
    }
}

SegmentSelector SegmentSelector::parse(std::string_view text) {
    std::vector<Segment> parts;
    for (const auto& raw : io::split(text, ',')) {
        auto name = io::trim(raw);
        if (name.empty()) {
            continue;
        }
        auto seg = segment_from_name(name);
        if (!seg) {
            throw ValidationError("unknown segment '" + std::string(name) +
                                  "' (expected title, keyword, abstract, main, learnobj, iaq, "
                                  "semantic_summary)");
        }
        parts.push_back(*seg);
    }
    return SegmentSelector(std::move(parts));
}

bool SegmentSelector::contains(Segment segment) const {
    return std::find(parts_.begin(), parts_.end(), segment) != parts_.end();
}

std::string SegmentSelector::to_string() const {
    std::string out;
    for (auto s : parts_) {
        if (!out.empty()) {
            out += ',';
        }
        out += segment_name(s);
    }
    return out;
}

std::string select_text(const Topic& topic, const SegmentSelector& selector,
                        const SummaryMap* summaries) {
    std::string out;
    for (auto part : selector.parts()) {
        switch (part) {
            case Segment::title: append_part(out, topic.title); break;
            case Segment::keyword: append_part(out, join(topic.keywords, ". ")); break;
            case Segment::abstract_text: append_part(out, topic.abstract_text); break;
            case Segment::main: append_part(out, topic.main); break;
            case Segment::learnobj: append_part(out, join(topic.learning_objectives, " ")); break;
            case Segment::iaq: append_part(out, join(topic.assessment_questions, " ")); break;
            case Segment::semantic_summary: {
                auto it = summaries ? summaries->find(topic.id) : SummaryMap::const_iterator{};
                if (!summaries || it == summaries->end()) {
                    throw ValidationError("no semantic summary for topic '" + topic.id + "'");
                }
                append_part(out, it->second);
                break;
            }
        }
    }
    return out;
}

CorpusStats corpus_stats(const Corpus& corpus) {
    CorpusStats stats;
    stats.topic_count = corpus.size();
    std::size_t total = 0;
    bool first = true;
    for (const auto& t : corpus.topics()) {
        ++stats.per_ka[t.knowledge_area];
        auto n = t.related.size();
        total += n;
        stats.min_related = first ? n : std::min(stats.min_related, n);
        stats.max_related = first ? n : std::max(stats.max_related, n);
        first = false;
        if (n == 0) {
            ++stats.empty_related;
        }
    }
    if (stats.topic_count > 0) {
        stats.mean_related = static_cast<double>(total) / static_cast<double>(stats.topic_count);
    }
    return stats;
}

std::string format_stats(const CorpusStats& stats) {
    std::ostringstream out;
    out << "topics: " << stats.topic_count << "\n";
    out << "knowledge areas:";
    for (const auto& [ka, n] : stats.per_ka) {
        out << ' ' << ka << '=' << n;
    }
    out << "\n";
    out << "related per topic: mean " << io::format_double(stats.mean_related) << ", min "
        << stats.min_related << ", max " << stats.max_related << "\n";
    out << "topics without related: " << stats.empty_related << "\n";
    return out.str();
}

std::string stats_to_json(const CorpusStats& stats) {
    nlohmann::ordered_json out;
    out["topic_count"] = stats.topic_count;
    out["per_ka"] = stats.per_ka;
    out["mean_related"] = stats.mean_related;
    out["min_related"] = stats.min_related;
    out["max_related"] = stats.max_related;
    out["empty_related"] = stats.empty_related;
    return out.dump(2) + "\n";
}

}  // namespace boksim::corpus
