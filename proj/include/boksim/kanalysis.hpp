#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "boksim/corpus.hpp"
#include "boksim/simrank.hpp"

namespace boksim::kanalysis {

// counts[h][t]: (seed in KA h, candidate in KA t) pairs among top-k rankings.
// Rows are chord heads, columns chord tails, the diagonal intra-KA similarity.
struct ChordMatrix {
    std::size_t k = 0;
    std::vector<std::string> kas;  // alphabetical
    std::vector<std::vector<std::uint64_t>> counts;

    std::uint64_t total() const;
    bool operator==(const ChordMatrix&) const = default;
};

// KA axis = every KA present in the corpus. Throws ValidationError when a
// query or candidate is not a corpus topic.
ChordMatrix chord_matrix(std::span<const simrank::Ranking> rankings, const corpus::Corpus& corpus,
                         std::size_t k);

struct KaSummaryRow {
    std::string ka;
    std::uint64_t intra = 0;  // diagonal
    std::uint64_t heads = 0;  // row total
    std::uint64_t tails = 0;  // column total
};

struct KaSummary {
    std::vector<KaSummaryRow> rows;
    // First KA (alphabetically) attaining each maximum; empty when there are no KAs.
    std::string intra_argmax;
    std::string head_argmax;
    std::string tail_argmax;
};

KaSummary ka_summary(const ChordMatrix& matrix);
std::string ka_summary_to_csv(const KaSummary& summary);

enum class ChordFormat { csv, json, plot };

// {"k": k, "kas": [...], "counts": [[...], ...]}
std::string chords_to_json(const ChordMatrix& matrix);
ChordMatrix parse_chords_json(std::string_view text);
// Top-left cell "k=<k>", then tail KAs; first column holds head KAs.
std::string chords_to_csv(const ChordMatrix& matrix);
ChordMatrix parse_chords_csv(std::string_view text);
// SVG grouped bar chart of intra/head/tail sums per KA.
std::string chords_to_svg(const ChordMatrix& matrix);

std::string render_chords(const ChordMatrix& matrix, ChordFormat format);

}  // namespace boksim::kanalysis
