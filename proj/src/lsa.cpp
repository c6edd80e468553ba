#include <Eigen/Sparse>

#include "boksim/embed.hpp"
#include "boksim/error.hpp"

namespace boksim::embed {

namespace {

Eigen::SparseMatrix<double> sparse_term_document(const TfidfModel& tfidf,
                                                 std::span<const TokenStream> docs) {
    std::vector<Eigen::Triplet<double>> entries;
    for (std::size_t j = 0; j < docs.size(); ++j) {
        Eigen::VectorXd column = tfidf_column(tfidf, docs[j]);
        for (Eigen::Index i = 0; i < column.size(); ++i) {
            if (column(i) != 0.0) {
                entries.emplace_back(i, static_cast<Eigen::Index>(j), column(i));
            }
        }
    }
    Eigen::SparseMatrix<double> matrix(static_cast<Eigen::Index>(tfidf.vocab_size()),
                                       static_cast<Eigen::Index>(docs.size()));
    matrix.setFromTriplets(entries.begin(), entries.end());
    return matrix;
}

}  // namespace

Eigen::MatrixXd term_document_matrix(const TfidfModel& tfidf, std::span<const TokenStream> docs) {
    return Eigen::MatrixXd(sparse_term_document(tfidf, docs));
}

LsaModel fit_lsa(const TfidfModel& tfidf, std::span<const TokenStream> docs, std::size_t rank,
                 std::uint64_t seed) {
    if (docs.empty()) {
        throw ValidationError("LSA needs at least one document");
    }
    const std::size_t limit = std::min(tfidf.vocab_size(), docs.size());
    if (rank < 1 || rank > limit) {
        throw ValidationError("LSA rank " + std::to_string(rank) + " outside [1, " +
                              std::to_string(limit) + "] (min of vocabulary and document count)");
    }
    auto matrix = sparse_term_document(tfidf, docs);
    linalg::RandomizedSvdOptions opts;
    opts.seed = seed;
    auto svd = linalg::randomized_svd(matrix, static_cast<int>(rank), opts);

    LsaModel model;
    model.tfidf = tfidf;
    model.rank = rank;
    model.term_basis = std::move(svd.u);
    model.singular_values = std::move(svd.singular);
    model.power_iterations = svd.power_iterations;
    return model;
}

DocVector embed_lsa(const LsaModel& model, const TokenStream& doc) {
    Eigen::VectorXd column = tfidf_column(model.tfidf, doc);
    Eigen::VectorXd projected = model.term_basis.transpose() * column;
    // A document orthogonal to the latent space projects to rounding noise.
    double norm = projected.norm();
    if (norm <= kLsaNullTolerance * column.norm()) {
        projected.setZero();
    } else {
        projected /= norm;
    }
    return DocVector{"lsa", std::vector<double>(projected.begin(), projected.end())};
}

}  // namespace boksim::embed
