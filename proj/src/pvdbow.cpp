#include <algorithm>
#include <cmath>
#include <numeric>

#include "boksim/embed.hpp"
#include "boksim/error.hpp"

namespace boksim::embed {

namespace {

double sigmoid(double x) {
    if (x > 30.0) {
        return 1.0;
    }
    if (x < -30.0) {
        return 0.0;
    }
    return 1.0 / (1.0 + std::exp(-x));
}

// Samples word indices proportionally to count^0.75.
class NoiseDistribution {
public:
    explicit NoiseDistribution(const std::vector<std::uint64_t>& counts) {
        cumulative_.reserve(counts.size());
        double total = 0.0;
        for (auto c : counts) {
            total += std::pow(static_cast<double>(c), 0.75);
            cumulative_.push_back(total);
        }
    }

    std::size_t sample(linalg::UniformSource& rng) const {
        double target = rng.next_unit() * cumulative_.back();
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
        auto idx = static_cast<std::size_t>(it - cumulative_.begin());
        return std::min(idx, cumulative_.size() - 1);
    }

private:
    std::vector<double> cumulative_;
};

}  // namespace

PvdbowModel fit_pvdbow(const std::map<std::string, TokenStream>& docs, const PvdbowParams& params) {
    if (docs.empty()) {
        throw ValidationError("PV-DBOW needs at least one document");
    }
    if (params.dim < 2 || params.epochs < 1 || params.negative < 0 ||
        !(params.learning_rate > 0.0)) {
        throw ValidationError("PV-DBOW needs dim >= 2, epochs >= 1, negative >= 0, lr > 0");
    }
    PvdbowModel model;
    model.params = params;

    std::map<std::string, std::uint64_t> counts;
    std::uint64_t total_tokens = 0;
    for (const auto& [id, stream] : docs) {
        for (const auto& tok : stream.tokens) {
            ++counts[tok];
            ++total_tokens;
        }
    }
    if (total_tokens == 0) {
        throw ValidationError("PV-DBOW needs at least one token");
    }
    std::vector<std::uint64_t> count_list;
    std::map<std::string, std::size_t, std::less<>> index;
    for (const auto& [tok, c] : counts) {
        index.emplace(tok, model.vocabulary.size());
        model.vocabulary.push_back(tok);
        count_list.push_back(c);
    }
    const std::size_t dim = params.dim;
    NoiseDistribution noise(count_list);
    linalg::UniformSource rng(params.seed);

    std::vector<std::vector<double>> doc_vecs;
    std::vector<std::vector<std::size_t>> doc_words;
    for (const auto& [id, stream] : docs) {
        std::vector<double> v(dim);
        for (double& x : v) {
            x = (rng.next_unit() - 0.5) / static_cast<double>(dim);
        }
        doc_vecs.push_back(std::move(v));
        std::vector<std::size_t> words;
        words.reserve(stream.tokens.size());
        for (const auto& tok : stream.tokens) {
            words.push_back(index.find(tok)->second);
        }
        doc_words.push_back(std::move(words));
    }

    std::vector<double>& out_weights = model.word_output_weights;
    out_weights.assign(model.vocabulary.size() * dim, 0.0);
    std::vector<double> grad(dim);
    std::vector<std::size_t> order(docs.size());
    std::iota(order.begin(), order.end(), 0);

    const double total_steps = static_cast<double>(params.epochs) * static_cast<double>(total_tokens);
    double step = 0.0;
    for (int epoch = 0; epoch < params.epochs; ++epoch) {
        for (std::size_t i = order.size(); i > 1; --i) {
            std::swap(order[i - 1], order[rng.next_raw() % i]);
        }
        for (std::size_t d : order) {
            auto& doc = doc_vecs[d];
            for (std::size_t word : doc_words[d]) {
                double lr = params.learning_rate -
                            (params.learning_rate - params.min_learning_rate) * step / total_steps;
                lr = std::max(lr, params.min_learning_rate);
                step += 1.0;
                std::fill(grad.begin(), grad.end(), 0.0);
                for (int n = 0; n <= params.negative; ++n) {
                    std::size_t target = word;
                    double label = 1.0;
                    if (n > 0) {
                        target = noise.sample(rng);
                        if (target == word) {
                            continue;
                        }
                        label = 0.0;
                    }
                    double* row = &out_weights[target * dim];
                    double f = 0.0;
                    for (std::size_t c = 0; c < dim; ++c) {
                        f += doc[c] * row[c];
                    }
                    double g = (label - sigmoid(f)) * lr;
                    for (std::size_t c = 0; c < dim; ++c) {
                        grad[c] += g * row[c];
                        row[c] += g * doc[c];
                    }
                }
                for (std::size_t c = 0; c < dim; ++c) {
                    doc[c] += grad[c];
                }
            }
        }
    }

    std::size_t d = 0;
    for (const auto& [id, stream] : docs) {
        model.doc_vectors.emplace(id, std::move(doc_vecs[d++]));
    }
    return model;
}

DocVector pvdbow_vector(const PvdbowModel& model, std::string_view doc_id) {
    auto it = model.doc_vectors.find(std::string(doc_id));
    if (it == model.doc_vectors.end()) {
        throw ValidationError("PV-DBOW model has no vector for '" + std::string(doc_id) + "'");
    }
    return DocVector{"pvdbow", it->second};
}

}  // namespace boksim::embed
