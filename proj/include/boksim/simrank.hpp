#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "boksim/embed.hpp"

namespace boksim::simrank {

using embed::DocVector;

// A.B / (|A| |B|), or 0 when either vector is all zeros.
// Throws ValidationError on a dimension mismatch.
double cosine(std::span<const double> a, std::span<const double> b);
double cosine(const DocVector& a, const DocVector& b);

struct SimilarityMatrix {
    std::vector<std::string> topic_ids;
    Eigen::MatrixXd values;  // symmetric

    std::size_t size() const { return topic_ids.size(); }
    std::ptrdiff_t index_of(std::string_view id) const;  // -1 if absent
};

// Cosine over all pairs. The diagonal is exactly 1 for nonzero vectors and 0
// for zero vectors; each off-diagonal pair is computed once and mirrored.
SimilarityMatrix pairwise(std::span<const std::string> ids, std::span<const DocVector> vectors);

struct Candidate {
    std::string id;
    double score = 0.0;

    bool operator==(const Candidate&) const = default;
};

struct Ranking {
    std::string query_id;
    std::size_t k = 0;
    std::vector<Candidate> entries;  // self excluded, score non-increasing

    bool operator==(const Ranking&) const = default;
};

// Candidates by score descending, ties by id ascending, truncated to k.
Ranking top_k(const SimilarityMatrix& matrix, std::string_view query_id, std::size_t k);

// One ranking per topic of the matrix, in matrix order.
std::vector<Ranking> rank_all(const SimilarityMatrix& matrix, std::size_t k);

// First min(k, size) entries of an existing ranking.
Ranking truncate(const Ranking& ranking, std::size_t k);

// JSON lines: {"query": id, "k": k, "candidates": [{"id": ..., "score": ...}, ...]}
std::string rankings_to_jsonl(std::span<const Ranking> rankings);
std::vector<Ranking> parse_rankings_jsonl(std::string_view text);

// CSV with the ids as header row and first column.
std::string matrix_to_csv(const SimilarityMatrix& matrix);

}  // namespace boksim::simrank
