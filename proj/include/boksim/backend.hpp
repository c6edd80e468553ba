#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "boksim/embed.hpp"
#include "boksim/provider.hpp"
#include "boksim/textprep.hpp"

namespace boksim::embed {

enum class BackendKind { tfidf, lsa, avg, pvdbow, external };

std::string_view backend_name(BackendKind kind);
std::optional<BackendKind> backend_from_name(std::string_view name);

struct BackendConfig {
    BackendKind kind = BackendKind::tfidf;
    std::size_t lsa_rank = kDefaultLsaRank;
    std::uint64_t seed = 42;
    std::shared_ptr<const VectorTable> vectors;       // avg backend
    provider::ProviderClient* provider = nullptr;     // external backend, handshake done
    PvdbowParams pvdbow;
    textprep::PhraseParams phrases;
    textprep::StopwordSet stopwords = textprep::default_stopwords();
};

struct EmbeddingRun {
    std::vector<DocVector> vectors;
    AvgWarnings avg_warnings;
};

// Tokenize with stopword removal, then fit and apply the phrase model over the
// whole collection.
std::vector<TokenStream> preprocess(std::span<const std::string> texts,
                                    const textprep::StopwordSet& stopwords,
                                    const textprep::PhraseParams& phrases, std::size_t jobs = 1);

// One vector per text, in order. `ids` name the documents (PV-DBOW keys).
// Native backends tokenize and detect phrases first; the word-vector backend
// skips phrase merging so tokens match the pretrained table.
EmbeddingRun embed_documents(const BackendConfig& config, std::span<const std::string> ids,
                             std::span<const std::string> texts, std::size_t jobs = 1);

// Sends the texts to the provider; vectors come back in input order.
std::vector<DocVector> embed_external(provider::ProviderClient& client,
                                      std::span<const std::string> texts);

}  // namespace boksim::embed
