#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "boksim/linalg.hpp"
#include "boksim/textprep.hpp"

namespace boksim::embed {

using textprep::TokenStream;

// A document under one backend. Values are finite; an all-zero vector marks
// a document the backend could not represent (e.g. every token unknown).
struct DocVector {
    std::string backend_id;
    std::vector<double> values;

    std::size_t dim() const { return values.size(); }
    bool is_zero() const;
    bool operator==(const DocVector&) const = default;
};

// Throws ValidationError if the vector is empty or has a non-finite entry.
void check_doc_vector(const DocVector& v);

// ---- TF-IDF --------------------------------------------------------------

struct TfidfModel {
    std::map<std::string, std::size_t, std::less<>> vocabulary;  // token -> column
    std::vector<double> idf;
    std::size_t doc_count = 0;

    std::size_t vocab_size() const { return idf.size(); }
};

// Vocabulary columns are assigned in lexicographic token order.
// idf(t) = ln((1 + N) / (1 + df(t))) + 1.
TfidfModel fit_tfidf(std::span<const TokenStream> docs);

// count(t) * idf(t) per vocabulary token, L2-normalized. Unknown tokens are
// ignored; a document with no known token maps to the zero vector.
DocVector embed_tfidf(const TfidfModel& model, const TokenStream& doc);
Eigen::VectorXd tfidf_column(const TfidfModel& model, const TokenStream& doc);

// ---- LSA -----------------------------------------------------------------

// Projections shorter than this fraction of the input norm are treated as zero.
inline constexpr double kLsaNullTolerance = 1e-10;

struct LsaModel {
    TfidfModel tfidf;
    std::size_t rank = 0;
    Eigen::MatrixXd term_basis;      // V x rank, left singular vectors
    Eigen::VectorXd singular_values;  // non-increasing
    int power_iterations = 0;
};

inline constexpr std::size_t kDefaultLsaRank = 53;

// Rank-r truncated SVD of the V x N matrix whose columns are the normalized
// TF-IDF vectors of `docs`.
LsaModel fit_lsa(const TfidfModel& tfidf, std::span<const TokenStream> docs, std::size_t rank,
                 std::uint64_t seed = 42);

// Projects the document's TF-IDF vector onto the term basis and normalizes.
DocVector embed_lsa(const LsaModel& model, const TokenStream& doc);

// Normalized TF-IDF columns as a V x N matrix.
Eigen::MatrixXd term_document_matrix(const TfidfModel& tfidf, std::span<const TokenStream> docs);

// ---- Pretrained word vectors ----------------------------------------------

class VectorTable {
public:
    VectorTable() = default;
    explicit VectorTable(std::size_t dim) : dim_(dim) {}

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return tokens_.size(); }

    // Throws ValidationError on a duplicate token or wrong length.
    void add(std::string token, std::span<const double> values);
    std::span<const double> find(std::string_view token) const;  // empty if absent
    const std::vector<std::string>& tokens() const { return tokens_; }

private:
    std::size_t dim_ = 0;
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<double> data_;
};

// Text format: "<token> <v1> ... <vdim>" per line, no header. The dimension
// is taken from the first row.
VectorTable parse_vector_table(std::string_view text, std::string_view source = "vectors");
VectorTable load_vector_table(const std::filesystem::path& path);
std::string format_vector_table(std::span<const std::string> ids,
                                std::span<const DocVector> vectors);

struct AvgWarnings {
    std::size_t oov_tokens = 0;
    std::size_t all_oov_docs = 0;
};

// Mean of the vectors of in-table tokens; OOV tokens are skipped.
DocVector embed_avg(const VectorTable& table, const TokenStream& doc,
                    AvgWarnings* warnings = nullptr);

// ---- PV-DBOW ---------------------------------------------------------------

struct PvdbowParams {
    std::size_t dim = 300;
    int epochs = 40;
    int negative = 5;
    double learning_rate = 0.025;
    double min_learning_rate = 0.0001;
    std::uint64_t seed = 42;
};

struct PvdbowModel {
    PvdbowParams params;
    std::vector<std::string> vocabulary;              // sorted
    std::map<std::string, std::vector<double>> doc_vectors;
    std::vector<double> word_output_weights;          // vocab x dim, row-major
};

// Paragraph vectors, distributed bag-of-words: each document vector is trained
// to predict its own tokens with negative sampling over unigram^0.75 noise.
// Single-threaded and fully determined by params.seed.
PvdbowModel fit_pvdbow(const std::map<std::string, TokenStream>& docs,
                       const PvdbowParams& params = {});

DocVector pvdbow_vector(const PvdbowModel& model, std::string_view doc_id);

}  // namespace boksim::embed
