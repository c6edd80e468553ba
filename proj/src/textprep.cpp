#include "boksim/textprep.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "boksim/error.hpp"
#include "boksim/io.hpp"

namespace boksim::textprep {

namespace {

constexpr std::array<std::string_view, 24> kAbbreviations = {
    "e.g.", "i.e.", "dr.",  "fig.", "figs.", "al.",  "mr.",  "mrs.",
    "ms.",  "prof.", "vs.", "cf.",  "eq.",   "eqs.", "no.",  "st.",
    "jr.",  "sr.",  "approx.", "u.s.", "ca.", "vol.", "pp.", "inc."};

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }

char to_lower(char c) { return is_upper(c) ? static_cast<char>(c - 'A' + 'a') : c; }

bool is_token_byte(char c) {
    auto u = static_cast<unsigned char>(c);
    return (u >= 'a' && u <= 'z') || (u >= 'A' && u <= 'Z') || (u >= '0' && u <= '9') ||
           u == '_' || u >= 0x80;
}

bool is_closer(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }

// The whitespace-delimited word that ends at `dot` (inclusive), lowercased.
std::string word_ending_at(std::string_view text, std::size_t dot) {
    std::size_t start = dot;
    while (start > 0 && !is_space(text[start - 1])) {
        --start;
    }
    while (start < dot && (text[start] == '(' || text[start] == '"' || text[start] == '\'')) {
        ++start;
    }
    std::string word;
    for (std::size_t i = start; i <= dot; ++i) {
        word += to_lower(text[i]);
    }
    return word;
}

bool is_abbreviation(std::string_view word) {
    for (auto abbr : kAbbreviations) {
        if (abbr == word) {
            return true;
        }
    }
    return false;
}

std::size_t utf8_length(std::string_view s) {
    std::size_t n = 0;
    for (char c : s) {
        if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
            ++n;
        }
    }
    return n;
}

PhraseLayer fit_layer(std::span<const TokenStream> streams, const PhraseParams& params) {
    PhraseLayer layer;
    layer.min_count = params.min_count;
    layer.threshold = params.threshold;
    for (const auto& stream : streams) {
        const auto& tok = stream.tokens;
        for (std::size_t i = 0; i < tok.size(); ++i) {
            ++layer.unigram_counts[tok[i]];
            if (i + 1 < tok.size()) {
                ++layer.pair_counts[{tok[i], tok[i + 1]}];
            }
        }
    }
    layer.vocab_size = layer.unigram_counts.size();
    if (layer.vocab_size == 0) {
        throw ValidationError("phrase detection needs at least one token");
    }
    return layer;
}

}  // namespace

StopwordSet parse_stopwords(std::string_view text) {
    StopwordSet words;
    for (const auto& raw : io::split(text, '\n')) {
        auto line = io::trim(raw);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        std::string word;
        for (char c : line) {
            word += to_lower(c);
        }
        words.insert(std::move(word));
    }
    return words;
}

StopwordSet load_stopwords(const std::filesystem::path& path) {
    return parse_stopwords(io::read_file(path));
}

std::vector<std::string> split_sentences(std::string_view text) {
    std::vector<std::string> sentences;
    auto emit = [&](std::size_t begin, std::size_t end) {
        auto piece = io::trim(text.substr(begin, end - begin));
        if (!piece.empty()) {
            sentences.emplace_back(piece);
        }
    };
    const std::size_t n = text.size();
    std::size_t start = 0;
    std::size_t i = 0;
    while (i < n) {
        char c = text[i];
        if (c != '.' && c != '?' && c != '!') {
            ++i;
            continue;
        }
        std::size_t last_punct = i;
        std::size_t j = i + 1;
        while (j < n && (text[j] == '.' || text[j] == '?' || text[j] == '!')) {
            last_punct = j++;
        }
        while (j < n && is_closer(text[j])) {
            ++j;
        }
        std::size_t k = j;
        while (k < n && is_space(text[k])) {
            ++k;
        }
        bool boundary = false;
        if (k == n) {
            boundary = true;
        } else if (k > j && is_upper(text[k])) {
            boundary = !(text[last_punct] == '.' && last_punct == i &&
                         is_abbreviation(word_ending_at(text, i)));
        }
        if (boundary) {
            emit(start, j);
            start = j;
        }
        i = j;
    }
    if (start < n) {
        emit(start, n);
    }
    return sentences;
}

TokenStream tokenize(std::string_view text, const StopwordSet& stopwords) {
    TokenStream out;
    std::string current;
    auto flush = [&] {
        if (utf8_length(current) >= 2 && stopwords.find(current) == stopwords.end()) {
            out.tokens.push_back(current);
        }
        current.clear();
    };
    for (char c : text) {
        if (is_token_byte(c)) {
            current += to_lower(c);
        } else if (!current.empty()) {
            flush();
        }
    }
    if (!current.empty()) {
        flush();
    }
    return out;
}

double PhraseLayer::score(std::string_view a, std::string_view b) const {
    auto ia = unigram_counts.find(a);
    auto ib = unigram_counts.find(b);
    if (ia == unigram_counts.end() || ib == unigram_counts.end()) {
        return -std::numeric_limits<double>::infinity();
    }
    auto ip = pair_counts.find({std::string(a), std::string(b)});
    double joint = ip == pair_counts.end() ? 0.0 : static_cast<double>(ip->second);
    return (joint - min_count) * static_cast<double>(vocab_size) /
           (static_cast<double>(ia->second) * static_cast<double>(ib->second));
}

bool PhraseLayer::qualifies(std::string_view a, std::string_view b) const {
    return score(a, b) > threshold;
}

PhraseModel fit_phrases(std::span<const TokenStream> streams, const PhraseParams& params) {
    if (streams.empty()) {
        throw ValidationError("phrase detection needs at least one token stream");
    }
    if (params.passes < 1 || params.passes > 2) {
        throw ValidationError("phrase passes must be 1 or 2");
    }
    if (params.min_count < 0.0 || !(params.threshold > 0.0)) {
        throw ValidationError("phrase min_count must be >= 0 and threshold > 0");
    }
    PhraseModel model;
    model.layers.push_back(fit_layer(streams, params));
    if (params.passes == 2) {
        std::vector<TokenStream> merged;
        merged.reserve(streams.size());
        for (const auto& s : streams) {
            merged.push_back(apply_layer(model.layers.front(), s));
        }
        model.layers.push_back(fit_layer(merged, params));
    }
    return model;
}

TokenStream apply_layer(const PhraseLayer& layer, const TokenStream& stream) {
    TokenStream out;
    const auto& tok = stream.tokens;
    out.tokens.reserve(tok.size());
    std::size_t i = 0;
    while (i < tok.size()) {
        if (i + 1 < tok.size() && layer.qualifies(tok[i], tok[i + 1])) {
            out.tokens.push_back(tok[i] + "_" + tok[i + 1]);
            i += 2;
        } else {
            out.tokens.push_back(tok[i]);
            ++i;
        }
    }
    return out;
}

TokenStream apply_phrases(const PhraseModel& model, const TokenStream& stream) {
    TokenStream out = stream;
    for (const auto& layer : model.layers) {
        out = apply_layer(layer, out);
    }
    return out;
}

}  // namespace boksim::textprep
