#include "boksim/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>

#include <CLI11.hpp>
#include <json.hpp>

#include "boksim/backend.hpp"
#include "boksim/corpus.hpp"
#include "boksim/error.hpp"
#include "boksim/evalmetrics.hpp"
#include "boksim/io.hpp"
#include "boksim/kacers.hpp"
#include "boksim/kanalysis.hpp"
#include "boksim/parallel.hpp"
#include "boksim/provider.hpp"
#include "boksim/simrank.hpp"
#include "boksim/sweep.hpp"

namespace boksim::cli {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

constexpr const char* kDefaultKs = "1,2,3,4,5,6,7,8,9,10";
constexpr const char* kDefaultSegments = "title,keyword,abstract,main";

struct Options {
    std::string corpus;
    std::string out = "out";
    std::string backend = "tfidf";
    std::size_t rank_r = embed::kDefaultLsaRank;
    std::uint64_t seed = 42;
    std::string vectors;
    std::string provider;
    std::vector<std::string> segments;
    std::optional<std::size_t> kacers_t;
    std::string n_main;
    std::string n_abs;
    std::string scorer;
    std::string k = kDefaultKs;
    bool strict = false;
    bool lenient = false;
    std::size_t jobs = 1;
    std::string format = "csv";
    std::string mode = "segments";
    std::string summaries;
    std::string embeddings;
    std::string rankings;
    std::string stopwords;
    std::size_t pv_dim = 300;
    int pv_epochs = 40;
    int pv_negative = 5;
    double pv_lr = 0.025;
};

// Flags that take no value; a config entry "name = true" turns them on.
const std::set<std::string> kFlagOptions = {"strict", "lenient"};

CLI::Option* scalar(CLI::Option* opt) {
    return opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
}

void add_corpus(CLI::App* sub, Options& o) {
    scalar(sub->add_option("--corpus", o.corpus, "Corpus JSON file")->required());
    sub->add_flag("--strict", o.strict, "Reject dangling related ids and unknown keys (default)");
    sub->add_flag("--lenient", o.lenient, "Drop dangling related ids and ignore unknown keys");
}

void add_out(CLI::App* sub, Options& o) {
    scalar(sub->add_option("--out", o.out, "Output directory")->capture_default_str());
}

void add_jobs(CLI::App* sub, Options& o) {
    scalar(sub->add_option("--jobs", o.jobs, "Worker threads for per-topic work")
               ->capture_default_str()
               ->check(CLI::Range(std::size_t{1}, std::size_t{1024})));
}

void add_ks(CLI::App* sub, Options& o) {
    scalar(sub->add_option("--k", o.k, "Comma-separated cutoffs k")->capture_default_str());
}

void add_stopwords(CLI::App* sub, Options& o) {
    scalar(sub->add_option("--stopwords", o.stopwords,
                           "Stopword file replacing the built-in English list"));
}

void add_scoring(CLI::App* sub, Options& o) {
    scalar(sub->add_option("--scorer", o.scorer,
                           "KACERS scorer: lexical|embedding|external (default: embedding when "
                           "--vectors is set, else lexical)")
               ->check(CLI::IsMember({"lexical", "embedding", "external"})));
    scalar(sub->add_option("--kacers-t", o.kacers_t,
                           "KACERS t for both segments unless --n-main/--n-abs are given"));
    scalar(sub->add_option("--n-main", o.n_main, "KACERS t for Main, or 'none' to keep it verbatim"));
    scalar(sub->add_option("--n-abs", o.n_abs,
                           "KACERS t for Abstract, or 'none' to keep it verbatim"));
}

void add_backend(CLI::App* sub, Options& o, bool list) {
    scalar(sub->add_option("--backend", o.backend,
                           list ? "Backends, comma-separated: tfidf|lsa|avg|pvdbow|external"
                                : "Backend: tfidf|lsa|avg|pvdbow|external")
               ->capture_default_str());
    scalar(sub->add_option("--rank-r", o.rank_r, "LSA rank (number of latent topics)")
               ->capture_default_str());
    scalar(sub->add_option("--seed", o.seed, "Random seed for LSA and PV-DBOW")
               ->capture_default_str());
    scalar(sub->add_option("--pv-dim", o.pv_dim, "PV-DBOW vector dimension")->capture_default_str());
    scalar(sub->add_option("--pv-epochs", o.pv_epochs, "PV-DBOW training epochs")
               ->capture_default_str());
    scalar(sub->add_option("--pv-negative", o.pv_negative, "PV-DBOW negative samples")
               ->capture_default_str());
    scalar(sub->add_option("--pv-lr", o.pv_lr, "PV-DBOW initial learning rate")
               ->capture_default_str());
}

void add_resources(CLI::App* sub, Options& o) {
    scalar(sub->add_option("--vectors", o.vectors, "Pretrained word-vector file"));
    scalar(sub->add_option("--provider", o.provider,
                           "Provider endpoint tcp://host:port or stdio:<command> "
                           "(BOKSIM_PROVIDER overrides)"));
}

void add_summaries(CLI::App* sub, Options& o) {
    scalar(sub->add_option("--summaries", o.summaries,
                           "Summary cache for the semantic_summary segment "
                           "(default: <out>/summaries.json)"));
}

corpus::LoadMode load_mode(const Options& o) {
    if (o.strict && o.lenient) {
        throw ValidationError("--strict and --lenient are mutually exclusive");
    }
    return o.lenient ? corpus::LoadMode::lenient : corpus::LoadMode::strict;
}

std::vector<std::size_t> parse_ks(const std::string& text) {
    std::set<std::size_t> ks;
    for (const auto& raw : io::split(text, ',')) {
        auto item = io::trim(raw);
        if (item.empty()) {
            continue;
        }
        double v = io::parse_double(item, "--k");
        if (v < 1.0 || v != static_cast<double>(static_cast<std::size_t>(v))) {
            throw ValidationError("--k values must be positive integers, got '" +
                                  std::string(item) + "'");
        }
        ks.insert(static_cast<std::size_t>(v));
    }
    if (ks.empty()) {
        throw ValidationError("--k needs at least one value");
    }
    return {ks.begin(), ks.end()};
}

std::optional<std::size_t> parse_t(const std::string& text, const char* flag) {
    if (text == "none") {
        return std::nullopt;
    }
    double v = io::parse_double(text, flag);
    if (v < 1.0 || v != static_cast<double>(static_cast<std::size_t>(v))) {
        throw ValidationError(std::string(flag) + " must be a positive integer or 'none'");
    }
    return static_cast<std::size_t>(v);
}

std::optional<std::size_t> kacers_param(const std::string& text, std::optional<std::size_t> t,
                                        std::size_t fallback, const char* flag) {
    if (!text.empty()) {
        return parse_t(text, flag);
    }
    if (t) {
        if (*t < 1) {
            throw ValidationError("--kacers-t must be >= 1");
        }
        return *t;
    }
    return fallback;
}

// Lazily created heavy resources shared by one subcommand run.
struct Resources {
    const Options& options;
    std::shared_ptr<const embed::VectorTable> table;
    std::unique_ptr<provider::ProviderClient> client;
    std::unique_ptr<kacers::Scorer> scorer;
    std::optional<textprep::StopwordSet> stopwords;

    explicit Resources(const Options& o) : options(o) {}

    const embed::VectorTable& vectors() {
        if (!table) {
            if (options.vectors.empty()) {
                throw ValidationError("--vectors is required here");
            }
            table = std::make_shared<const embed::VectorTable>(
                embed::load_vector_table(options.vectors));
        }
        return *table;
    }

    provider::ProviderClient& provider() {
        if (!client) {
            auto endpoint = provider::resolve_endpoint(
                options.provider.empty() ? std::nullopt : std::optional(options.provider));
            if (!endpoint) {
                throw ValidationError("--provider (or BOKSIM_PROVIDER) is required here");
            }
            client = std::make_unique<provider::ProviderClient>(provider::connect(*endpoint));
            client->handshake();
        }
        return *client;
    }

    const textprep::StopwordSet& stopword_set() {
        if (!stopwords) {
            stopwords = options.stopwords.empty() ? textprep::default_stopwords()
                                                  : textprep::load_stopwords(options.stopwords);
        }
        return *stopwords;
    }

    kacers::Scorer& kacers_scorer() {
        if (!scorer) {
            std::string name = options.scorer;
            if (name.empty()) {
                name = options.vectors.empty() ? "lexical" : "embedding";
            }
            if (name == "lexical") {
                scorer = std::make_unique<kacers::LexicalScorer>();
            } else if (name == "embedding") {
                vectors();
                scorer = std::make_unique<kacers::EmbeddingScorer>(table, stopword_set());
            } else {
                scorer = std::make_unique<kacers::ExternalScorer>(provider());
            }
        }
        return *scorer;
    }

    embed::BackendConfig backend(embed::BackendKind kind) {
        embed::BackendConfig config;
        config.kind = kind;
        config.lsa_rank = options.rank_r;
        config.seed = options.seed;
        config.pvdbow.dim = options.pv_dim;
        config.pvdbow.epochs = options.pv_epochs;
        config.pvdbow.negative = options.pv_negative;
        config.pvdbow.learning_rate = options.pv_lr;
        config.pvdbow.seed = options.seed;
        config.stopwords = stopword_set();
        if (kind == embed::BackendKind::avg) {
            vectors();
            config.vectors = table;
        }
        if (kind == embed::BackendKind::external) {
            config.provider = &provider();
        }
        return config;
    }
};

embed::BackendKind parse_backend(std::string_view name) {
    auto kind = embed::backend_from_name(io::trim(name));
    if (!kind) {
        throw ValidationError("unknown backend '" + std::string(name) +
                              "' (expected tfidf, lsa, avg, pvdbow, external)");
    }
    return *kind;
}

fs::path default_path(const std::string& explicit_path, const Options& o, const char* name) {
    return explicit_path.empty() ? fs::path(o.out) / name : fs::path(explicit_path);
}

void write_artifact(std::ostream& out, const fs::path& path, std::string_view contents) {
    io::write_file(path, contents);
    out << "wrote " << path.string() << "\n";
}

kacers::SummaryCache load_summary_cache(const Options& o) {
    return kacers::parse_summary_cache(io::read_file(default_path(o.summaries, o, "summaries.json")));
}

// ---- subcommands -----------------------------------------------------------

int cmd_ingest(const Options& o, std::ostream& out, bool write_outputs) {
    auto corpus = corpus::load_corpus(o.corpus, load_mode(o));
    auto stats = corpus::corpus_stats(corpus);
    out << corpus::format_stats(stats);
    const auto& report = corpus.load_report();
    if (report.warnings() > 0) {
        out << "lenient load: dropped " << report.dropped_related << " related ids, ignored "
            << report.ignored_keys << " unknown keys\n";
    }
    if (write_outputs) {
        write_artifact(out, fs::path(o.out) / "stats.json", corpus::stats_to_json(stats));
        write_artifact(out, fs::path(o.out) / "corpus.json", corpus::corpus_to_json(corpus));
    }
    return 0;
}

int cmd_summarize(const Options& o, std::ostream& out) {
    auto corpus = corpus::load_corpus(o.corpus, load_mode(o));
    auto n_main = kacers_param(o.n_main, o.kacers_t, kacers::kSemanticSummaryMainT, "--n-main");
    auto n_abs = kacers_param(o.n_abs, o.kacers_t, kacers::kSemanticSummaryAbstractT, "--n-abs");
    Resources res(o);
    auto& scorer = res.kacers_scorer();
    const auto& topics = corpus.topics();
    std::vector<std::string> texts(topics.size());
    // One scorer instance is shared, so external scoring stays on one connection.
    const std::size_t jobs = scorer.id() == "external" ? 1 : o.jobs;
    if (jobs > 1 && scorer.id() == "lexical") {
        parallel_for(topics.size(), jobs, [&](std::size_t i) {
            kacers::LexicalScorer local;
            texts[i] = kacers::build_semantic_summary(topics[i], n_main, n_abs, local);
        });
    } else {
        for (std::size_t i = 0; i < topics.size(); ++i) {
            texts[i] = kacers::build_semantic_summary(topics[i], n_main, n_abs, scorer);
        }
    }
    kacers::SummaryCache cache;
    for (std::size_t i = 0; i < topics.size(); ++i) {
        cache.emplace(topics[i].id, kacers::CachedSummary{texts[i], n_main, n_abs, scorer.id()});
    }
    write_artifact(out, fs::path(o.out) / "summaries.json", kacers::summary_cache_to_json(cache));
    return 0;
}

int cmd_embed(const Options& o, std::ostream& out) {
    auto corpus = corpus::load_corpus(o.corpus, load_mode(o));
    if (o.segments.size() > 1) {
        throw ValidationError("embed takes a single --segments list");
    }
    auto selector =
        corpus::SegmentSelector::parse(o.segments.empty() ? kDefaultSegments : o.segments.front());
    std::optional<corpus::SummaryMap> summaries;
    if (selector.contains(corpus::Segment::semantic_summary)) {
        summaries = kacers::summary_texts(load_summary_cache(o));
    }
    std::vector<std::string> ids;
    std::vector<std::string> texts;
    for (const auto& topic : corpus.topics()) {
        ids.push_back(topic.id);
        texts.push_back(corpus::select_text(topic, selector, summaries ? &*summaries : nullptr));
    }
    Resources res(o);
    auto kind = parse_backend(o.backend);
    auto run = embed::embed_documents(res.backend(kind), ids, texts, o.jobs);
    for (const auto& v : run.vectors) {
        embed::check_doc_vector(v);
    }
    ojson meta;
    meta["backend"] = embed::backend_name(kind);
    meta["dim"] = run.vectors.empty() ? 0 : run.vectors.front().dim();
    meta["documents"] = run.vectors.size();
    meta["segments"] = selector.to_string();
    meta["seed"] = o.seed;
    if (kind == embed::BackendKind::lsa) {
        meta["rank_r"] = o.rank_r;
    }
    if (kind == embed::BackendKind::pvdbow) {
        meta["pvdbow"] = {{"dim", o.pv_dim},
                          {"epochs", o.pv_epochs},
                          {"negative", o.pv_negative},
                          {"lr", o.pv_lr}};
    }
    if (kind == embed::BackendKind::avg) {
        meta["oov_tokens"] = run.avg_warnings.oov_tokens;
        meta["all_oov_documents"] = run.avg_warnings.all_oov_docs;
        if (run.avg_warnings.all_oov_docs > 0) {
            out << "warning: " << run.avg_warnings.all_oov_docs
                << " documents had no in-vocabulary tokens (zero vectors)\n";
        }
    }
    if (kind == embed::BackendKind::external) {
        meta["provider"] = res.provider().info().name;
    }
    write_artifact(out, fs::path(o.out) / "embeddings.txt", embed::format_vector_table(ids, run.vectors));
    write_artifact(out, fs::path(o.out) / "embeddings.meta.json", meta.dump(2) + "\n");
    return 0;
}

int cmd_rank(const Options& o, std::ostream& out) {
    auto ks = parse_ks(o.k);
    auto path = default_path(o.embeddings, o, "embeddings.txt");
    auto table = embed::load_vector_table(path);
    std::vector<std::string> ids = table.tokens();
    std::vector<embed::DocVector> vectors;
    for (const auto& id : ids) {
        auto values = table.find(id);
        vectors.push_back({"file", {values.begin(), values.end()}});
    }
    std::vector<std::size_t> order(ids.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return ids[a] < ids[b]; });
    std::vector<std::string> sorted_ids;
    std::vector<embed::DocVector> sorted_vectors;
    for (auto i : order) {
        sorted_ids.push_back(ids[i]);
        sorted_vectors.push_back(std::move(vectors[i]));
    }
    auto matrix = simrank::pairwise(sorted_ids, sorted_vectors);
    auto rankings = simrank::rank_all(matrix, ks.back());
    write_artifact(out, fs::path(o.out) / "rankings.jsonl", simrank::rankings_to_jsonl(rankings));
    write_artifact(out, fs::path(o.out) / "similarity.csv", simrank::matrix_to_csv(matrix));
    return 0;
}

int cmd_evaluate(const Options& o, std::ostream& out) {
    auto corpus = corpus::load_corpus(o.corpus, load_mode(o));
    auto ks = parse_ks(o.k);
    auto rankings = simrank::parse_rankings_jsonl(
        io::read_file(default_path(o.rankings, o, "rankings.jsonl")));
    auto report = eval::evaluate(rankings, corpus, ks);
    for (std::size_t i = 0; i < ks.size(); ++i) {
        const auto& m = report.macro[i];
        out << "@" << ks[i] << " recall " << io::format_double(m.recall) << " precision "
            << io::format_double(m.precision) << " f " << io::format_double(m.f)
            << " balanced_accuracy " << io::format_double(m.balanced_accuracy) << "\n";
    }
    out << "queries: " << report.included_query_count << " evaluated, "
        << report.skipped_query_count << " skipped (no related topics)\n";
    write_artifact(out, fs::path(o.out) / "metrics.csv", eval::report_to_csv(report));
    write_artifact(out, fs::path(o.out) / "metrics.json", eval::report_to_json(report));
    return 0;
}

int cmd_sweep(const Options& o, std::ostream& out) {
    auto corpus = corpus::load_corpus(o.corpus, load_mode(o));
    auto ks = parse_ks(o.k);
    Resources res(o);
    std::vector<embed::BackendKind> backends;
    for (const auto& name : io::split(o.backend, ',')) {
        if (!io::trim(name).empty()) {
            backends.push_back(parse_backend(name));
        }
    }
    if (backends.empty()) {
        throw ValidationError("--backend needs at least one backend");
    }
    std::vector<eval::SweepConfig> configs;
    eval::SweepContext context;
    context.jobs = o.jobs;
    std::optional<corpus::SummaryMap> summaries;
    if (o.mode == "table1") {
        if (backends.size() != 1) {
            throw ValidationError("table1 mode takes exactly one backend");
        }
        configs = eval::table1_configs(res.backend(backends.front()));
        context.scorer = &res.kacers_scorer();
    } else if (o.mode == "segments") {
        std::vector<std::string> selectors = o.segments;
        if (selectors.empty()) {
            selectors = {"title", "keyword", "abstract", "main", "learnobj", "iaq"};
        }
        for (auto kind : backends) {
            auto backend = res.backend(kind);
            for (const auto& text : selectors) {
                auto selector = corpus::SegmentSelector::parse(text);
                if (selector.contains(corpus::Segment::semantic_summary) && !summaries) {
                    summaries = kacers::summary_texts(load_summary_cache(o));
                }
                configs.push_back({backend, eval::InputSpec::segments(selector)});
            }
        }
        context.summaries = summaries ? &*summaries : nullptr;
    } else {
        throw ValidationError("unknown --mode '" + o.mode + "' (expected segments or table1)");
    }
    auto rows = eval::sweep(corpus, configs, ks, context);
    write_artifact(out, fs::path(o.out) / "sweep.csv", eval::sweep_to_csv(rows));
    if (o.mode == "table1") {
        write_artifact(out, fs::path(o.out) / "table1.csv", eval::table1_to_csv(rows, ks.back()));
    }
    ojson meta;
    meta["mode"] = o.mode;
    meta["backends"] = o.backend;
    meta["seed"] = o.seed;
    meta["ks"] = ks;
    meta["aggregation"] = "macro";
    if (o.mode == "table1") {
        meta["scorer"] = res.kacers_scorer().id();
        meta["composition"] = "main then abstract";
    }
    write_artifact(out, fs::path(o.out) / "sweep.meta.json", meta.dump(2) + "\n");
    return 0;
}

int cmd_analyze(const Options& o, std::ostream& out) {
    auto corpus = corpus::load_corpus(o.corpus, load_mode(o));
    auto ks = parse_ks(o.k);
    auto rankings = simrank::parse_rankings_jsonl(
        io::read_file(default_path(o.rankings, o, "rankings.jsonl")));
    auto matrix = kanalysis::chord_matrix(rankings, corpus, ks.back());
    auto summary = kanalysis::ka_summary(matrix);
    kanalysis::ChordFormat format = kanalysis::ChordFormat::csv;
    std::string ext = "csv";
    if (o.format == "json") {
        format = kanalysis::ChordFormat::json;
        ext = "json";
    } else if (o.format == "plot") {
        format = kanalysis::ChordFormat::plot;
        ext = "svg";
    }
    out << "most intra-KA similarity: " << summary.intra_argmax
        << "; most chord heads: " << summary.head_argmax
        << "; most chord tails: " << summary.tail_argmax << "\n";
    write_artifact(out, fs::path(o.out) / ("chords." + ext), kanalysis::render_chords(matrix, format));
    write_artifact(out, fs::path(o.out) / "ka_summary.csv", kanalysis::ka_summary_to_csv(summary));
    return 0;
}

// ---- config file -----------------------------------------------------------

std::map<std::string, std::string> read_config(const std::string& path) {
    std::map<std::string, std::string> values;
    std::string text;
    try {
        text = io::read_file(path);
    } catch (const Error&) {
        throw ValidationError("cannot read config file: " + path);
    }
    std::size_t line_no = 0;
    for (const auto& raw : io::split(text, '\n')) {
        ++line_no;
        auto line = io::trim(raw);
        if (line.empty() || line.front() == '#' || line.front() == ';' || line.front() == '[') {
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ValidationError(path + ":" + std::to_string(line_no) + ": expected key = value");
        }
        std::string key(io::trim(line.substr(0, eq)));
        std::string value(io::trim(line.substr(eq + 1)));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
            value = value.substr(1, value.size() - 2);
        }
        std::replace(key.begin(), key.end(), '_', '-');
        values[key] = value;
    }
    return values;
}

bool user_gave(const std::vector<std::string>& args, const std::string& name) {
    const std::string flag = "--" + name;
    return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
        return a == flag || a.starts_with(flag + "=");
    });
}

// Prepends config values for options the user did not pass, so command-line
// flags always win.
std::vector<std::string> apply_config(CLI::App& app, const std::vector<std::string>& args) {
    std::vector<std::string> rest;
    std::optional<std::string> config_path;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            config_path = args[++i];
        } else if (args[i].starts_with("--config=")) {
            config_path = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    std::vector<std::string> result{args.empty() ? std::string("boksim") : args[0]};
    if (!config_path || rest.empty()) {
        result.insert(result.end(), rest.begin(), rest.end());
        return result;
    }
    CLI::App* sub = nullptr;
    try {
        sub = app.get_subcommand(rest.front());
    } catch (const CLI::OptionNotFound&) {
        result.insert(result.end(), rest.begin(), rest.end());
        return result;
    }
    result.push_back(rest.front());
    const bool mode_given = user_gave(rest, "strict") || user_gave(rest, "lenient");
    for (const auto& [key, value] : read_config(*config_path)) {
        if (sub->get_option_no_throw("--" + key) == nullptr || user_gave(rest, key)) {
            continue;
        }
        if (kFlagOptions.count(key) != 0) {
            if (!mode_given && (value == "true" || value == "1" || value == "yes")) {
                result.push_back("--" + key);
            }
            continue;
        }
        if (key == "segments") {
            for (const auto& part : io::split(value, ';')) {
                result.push_back("--segments");
                result.push_back(std::string(io::trim(part)));
            }
            continue;
        }
        result.push_back("--" + key);
        result.push_back(value);
    }
    result.insert(result.end(), rest.begin() + 1, rest.end());
    return result;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Topic similarity analysis for segmented body-of-knowledge corpora", "boksim"};
    app.require_subcommand(1);
    app.add_option("--config", "Flat key = value config file; command-line flags win");

    auto* ingest = app.add_subcommand("ingest", "Validate a corpus, print statistics, write a normalized copy");
    add_corpus(ingest, o);
    add_out(ingest, o);

    auto* stats = app.add_subcommand("stats", "Print corpus statistics");
    add_corpus(stats, o);

    auto* summarize = app.add_subcommand("summarize", "Build keyword-aware summaries into <out>/summaries.json");
    add_corpus(summarize, o);
    add_out(summarize, o);
    add_scoring(summarize, o);
    add_resources(summarize, o);
    add_stopwords(summarize, o);
    add_jobs(summarize, o);

    auto* embed_cmd = app.add_subcommand("embed", "Embed every topic into <out>/embeddings.txt");
    add_corpus(embed_cmd, o);
    add_out(embed_cmd, o);
    add_backend(embed_cmd, o, false);
    add_resources(embed_cmd, o);
    scalar(embed_cmd->add_option("--segments", o.segments,
                                 "Comma list of title,keyword,abstract,main,learnobj,iaq,"
                                 "semantic_summary")
               ->default_str(kDefaultSegments));
    add_summaries(embed_cmd, o);
    add_stopwords(embed_cmd, o);
    add_jobs(embed_cmd, o);

    auto* rank = app.add_subcommand("rank", "Rank candidates per topic into <out>/rankings.jsonl");
    add_out(rank, o);
    add_ks(rank, o);
    scalar(rank->add_option("--embeddings", o.embeddings,
                            "Embedding file (default: <out>/embeddings.txt)"));

    auto* evaluate = app.add_subcommand("evaluate", "Score rankings against related topics");
    add_corpus(evaluate, o);
    add_out(evaluate, o);
    add_ks(evaluate, o);
    scalar(evaluate->add_option("--rankings", o.rankings,
                                "Rankings file (default: <out>/rankings.jsonl)"));

    auto* sweep = app.add_subcommand("sweep", "Compare inputs and backends in one run");
    add_corpus(sweep, o);
    add_out(sweep, o);
    add_ks(sweep, o);
    add_backend(sweep, o, true);
    add_resources(sweep, o);
    add_scoring(sweep, o);
    add_summaries(sweep, o);
    add_stopwords(sweep, o);
    add_jobs(sweep, o);
    scalar(sweep->add_option("--mode", o.mode, "segments | table1 (Main x Abstract KACERS grid)")
               ->capture_default_str()
               ->check(CLI::IsMember({"segments", "table1"})));
    sweep->add_option("--segments", o.segments,
                      "Segment combination to compare; repeat for several (segments mode)");

    auto* analyze = app.add_subcommand("analyze", "Knowledge-area chord counts from rankings");
    add_corpus(analyze, o);
    add_out(analyze, o);
    add_ks(analyze, o);
    scalar(analyze->add_option("--rankings", o.rankings,
                               "Rankings file (default: <out>/rankings.jsonl)"));
    scalar(analyze->add_option("--format", o.format, "csv | json | plot (SVG bar chart)")
               ->capture_default_str()
               ->check(CLI::IsMember({"csv", "json", "plot"})));

    try {
        auto final_args = apply_config(app, args);
        std::vector<const char*> argv;
        for (const auto& a : final_args) {
            argv.push_back(a.c_str());
        }
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 1;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (ingest->parsed()) return cmd_ingest(o, out, true);
        if (stats->parsed()) return cmd_ingest(o, out, false);
        if (summarize->parsed()) return cmd_summarize(o, out);
        if (embed_cmd->parsed()) return cmd_embed(o, out);
        if (rank->parsed()) return cmd_rank(o, out);
        if (evaluate->parsed()) return cmd_evaluate(o, out);
        if (sweep->parsed()) return cmd_sweep(o, out);
        if (analyze->parsed()) return cmd_analyze(o, out);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

}  // namespace boksim::cli
