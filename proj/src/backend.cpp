#include "boksim/backend.hpp"

#include <map>

#include "boksim/error.hpp"
#include "boksim/parallel.hpp"

namespace boksim::embed {

std::string_view backend_name(BackendKind kind) {
    switch (kind) {
        case BackendKind::tfidf: return "tfidf";
        case BackendKind::lsa: return "lsa";
        case BackendKind::avg: return "avg";
        case BackendKind::pvdbow: return "pvdbow";
        case BackendKind::external: return "external";
    }
    return "?";
}

std::optional<BackendKind> backend_from_name(std::string_view name) {
    for (auto k : {BackendKind::tfidf, BackendKind::lsa, BackendKind::avg, BackendKind::pvdbow,
                   BackendKind::external}) {
        if (backend_name(k) == name) {
            return k;
        }
    }
    return std::nullopt;
}

std::vector<TokenStream> preprocess(std::span<const std::string> texts,
                                    const textprep::StopwordSet& stopwords,
                                    const textprep::PhraseParams& phrases, std::size_t jobs) {
    std::vector<TokenStream> streams(texts.size());
    parallel_for(texts.size(), jobs,
                 [&](std::size_t i) { streams[i] = textprep::tokenize(texts[i], stopwords); });
    std::size_t total = 0;
    for (const auto& s : streams) {
        total += s.size();
    }
    if (total == 0) {
        return streams;
    }
    auto model = textprep::fit_phrases(streams, phrases);
    parallel_for(streams.size(), jobs,
                 [&](std::size_t i) { streams[i] = textprep::apply_phrases(model, streams[i]); });
    return streams;
}

std::vector<DocVector> embed_external(provider::ProviderClient& client,
                                      std::span<const std::string> texts) {
    if (texts.empty()) {
        return {};
    }
    auto raw = client.embed(texts);
    std::vector<DocVector> out;
    out.reserve(raw.size());
    for (auto& values : raw) {
        out.push_back(DocVector{"external", std::move(values)});
    }
    return out;
}

EmbeddingRun embed_documents(const BackendConfig& config, std::span<const std::string> ids,
                             std::span<const std::string> texts, std::size_t jobs) {
    if (ids.size() != texts.size()) {
        throw Error("embed_documents: ids and texts differ in length");
    }
    if (texts.empty()) {
        throw ValidationError("nothing to embed");
    }
    EmbeddingRun run;
    switch (config.kind) {
        case BackendKind::external: {
            if (config.provider == nullptr) {
                throw ValidationError("external backend needs a provider endpoint");
            }
            run.vectors = embed_external(*config.provider, texts);
            return run;
        }
        case BackendKind::avg: {
            if (!config.vectors) {
                throw ValidationError("avg backend needs a vectors file");
            }
            run.vectors.resize(texts.size());
            std::vector<AvgWarnings> warnings(texts.size());
            parallel_for(texts.size(), jobs, [&](std::size_t i) {
                run.vectors[i] = embed_avg(*config.vectors,
                                           textprep::tokenize(texts[i], config.stopwords),
                                           &warnings[i]);
            });
            for (const auto& w : warnings) {
                run.avg_warnings.oov_tokens += w.oov_tokens;
                run.avg_warnings.all_oov_docs += w.all_oov_docs;
            }
            return run;
        }
        case BackendKind::tfidf:
        case BackendKind::lsa:
        case BackendKind::pvdbow: break;
    }

    auto streams = preprocess(texts, config.stopwords, config.phrases, jobs);
    if (config.kind == BackendKind::pvdbow) {
        std::map<std::string, TokenStream> docs;
        for (std::size_t i = 0; i < ids.size(); ++i) {
            if (!docs.emplace(ids[i], streams[i]).second) {
                throw ValidationError("duplicate document id '" + ids[i] + "'");
            }
        }
        PvdbowParams params = config.pvdbow;
        params.seed = config.seed;
        auto model = fit_pvdbow(docs, params);
        for (const auto& id : ids) {
            run.vectors.push_back(pvdbow_vector(model, id));
        }
        return run;
    }
    auto tfidf = fit_tfidf(streams);
    if (tfidf.vocab_size() == 0) {
        throw ValidationError("corpus has no tokens after preprocessing");
    }
    if (config.kind == BackendKind::tfidf) {
        run.vectors.resize(streams.size());
        parallel_for(streams.size(), jobs,
                     [&](std::size_t i) { run.vectors[i] = embed_tfidf(tfidf, streams[i]); });
        return run;
    }
    auto lsa = fit_lsa(tfidf, streams, config.lsa_rank, config.seed);
    run.vectors.resize(streams.size());
    parallel_for(streams.size(), jobs,
                 [&](std::size_t i) { run.vectors[i] = embed_lsa(lsa, streams[i]); });
    return run;
}

}  // namespace boksim::embed
