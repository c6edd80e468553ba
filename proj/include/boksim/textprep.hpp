#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace boksim::textprep {

using StopwordSet = std::set<std::string, std::less<>>;

// Built-in English list (179 entries), mirrored in data/stopwords_en.txt.
const StopwordSet& default_stopwords();

// One token per line, '#' starts a comment.
StopwordSet parse_stopwords(std::string_view text);
StopwordSet load_stopwords(const std::filesystem::path& path);

// Lowercase tokens; merged phrases are joined with '_'.
struct TokenStream {
    std::vector<std::string> tokens;

    std::size_t size() const { return tokens.size(); }
    bool empty() const { return tokens.empty(); }
    bool operator==(const TokenStream&) const = default;
};

// Rule-based splitter: a boundary is '.', '?' or '!' followed by whitespace and
// an uppercase letter, or by the end of the text. Known abbreviations never end
// a sentence. Returned sentences are trimmed and never empty.
std::vector<std::string> split_sentences(std::string_view text);

// Lowercases ASCII, splits on anything that is not a letter, digit or '_'
// (bytes >= 0x80 count as letters), drops tokens shorter than two characters
// and stopwords.
TokenStream tokenize(std::string_view text, const StopwordSet& stopwords);

// Collocation statistics for one merge pass.
struct PhraseLayer {
    std::size_t vocab_size = 0;
    std::map<std::string, std::uint64_t, std::less<>> unigram_counts;
    std::map<std::pair<std::string, std::string>, std::uint64_t> pair_counts;
    double min_count = 5.0;
    double threshold = 10.0;

    // (count(ab) - min_count) * V / (count(a) * count(b)); pairs with an
    // unseen constituent score -infinity.
    double score(std::string_view a, std::string_view b) const;
    bool qualifies(std::string_view a, std::string_view b) const;
};

// One layer per pass; the second pass is fitted on first-pass output and
// produces trigrams.
struct PhraseModel {
    std::vector<PhraseLayer> layers;
};

struct PhraseParams {
    double min_count = 5.0;
    double threshold = 10.0;
    int passes = 2;
};

PhraseModel fit_phrases(std::span<const TokenStream> streams, const PhraseParams& params = {});

// Greedy left-to-right merge with each layer in turn.
TokenStream apply_phrases(const PhraseModel& model, const TokenStream& stream);
TokenStream apply_layer(const PhraseLayer& layer, const TokenStream& stream);

}  // namespace boksim::textprep
