// One PASS/FAIL line per acceptance criterion. Exit status is nonzero if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "boksim/backend.hpp"
#include "boksim/corpus.hpp"
#include "boksim/embed.hpp"
#include "boksim/evalmetrics.hpp"
#include "boksim/io.hpp"
#include "boksim/kacers.hpp"
#include "boksim/kanalysis.hpp"
#include "boksim/linalg.hpp"
#include "boksim/simrank.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace boksim;
using Strings = std::vector<std::string>;

namespace {

// Collects the first few failure messages of one criterion.
struct Check {
    std::size_t failures = 0;
    std::string first;

    void expect(bool ok, const std::string& what) {
        if (!ok) {
            if (failures == 0) first = what;
            ++failures;
        }
    }
    bool ok() const { return failures == 0; }
};

struct Criterion {
    int number;
    std::string name;
    double budget_seconds;  // 0 means no runtime bound
    std::function<void(Check&)> body;
};

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
}

// ---- 1 ---------------------------------------------------------------------

void metrics_oracle(Check& check) {
    std::mt19937_64 rng(1001);
    for (int instance = 0; instance < 1000; ++instance) {
        const std::size_t n = 3 + rng() % 10;  // N in [3, 12]
        std::vector<corpus::Topic> topics(n);
        for (std::size_t i = 0; i < n; ++i) topics[i].id = "T-" + std::to_string(10 + i);
        // Query is topic 0; at least one relevant and one irrelevant candidate.
        std::vector<std::string> others;
        for (std::size_t i = 1; i < n; ++i) others.push_back(topics[i].id);
        std::shuffle(others.begin(), others.end(), rng);
        const std::size_t nrel = 1 + rng() % (others.size() - 1);
        topics[0].related.assign(others.begin(), others.begin() + static_cast<long>(nrel));
        auto corpus = corpus::Corpus::from_topics(topics);
        const auto& query = *corpus.find("T-10");
        auto judgment = eval::judgment_for(corpus, query);

        std::shuffle(others.begin(), others.end(), rng);
        simrank::Ranking full{"T-10", others.size(), {}};
        for (std::size_t i = 0; i < others.size(); ++i) {
            full.entries.push_back({others[i], 1.0 - 0.01 * static_cast<double>(i)});
        }
        std::set<std::string> relevant(query.related.begin(), query.related.end());
        for (std::size_t k = 1; k <= n - 1; ++k) {
            auto ranked = simrank::truncate(full, k);
            auto got = eval::metrics_at_k(ranked, judgment);
            std::set<std::string> retrieved(others.begin(), others.begin() + static_cast<long>(k));
            auto ref = oracle::metrics_from_confusion(oracle::confusion(others, retrieved, relevant));
            const std::string where = "instance " + std::to_string(instance) + " k=" + std::to_string(k);
            check.expect(std::abs(got.recall - ref.recall) <= 1e-12, where + " recall " + fmt(got.recall) + " vs " + fmt(ref.recall));
            check.expect(std::abs(got.precision - ref.precision) <= 1e-12, where + " precision");
            check.expect(std::abs(got.f - ref.f) <= 1e-12, where + " f");
            check.expect(std::abs(got.balanced_accuracy - ref.balanced_accuracy) <= 1e-12,
                         where + " balanced accuracy " + fmt(got.balanced_accuracy) + " vs " + fmt(ref.balanced_accuracy));
        }
    }
}

// ---- 2 ---------------------------------------------------------------------

void cosine_suite(Check& check) {
    std::mt19937_64 rng(2002);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> scale(1e-3, 1e3);
    for (int i = 0; i < 1000; ++i) {
        const std::size_t d = 1 + rng() % 50;
        std::vector<double> a(d), b(d);
        for (auto& x : a) x = g(rng);
        for (auto& x : b) x = g(rng);
        const std::string where = "pair " + std::to_string(i);
        double ab = simrank::cosine(a, b);
        check.expect(std::abs(ab - oracle::cosine(a, b)) <= 1e-12, where + " oracle");
        check.expect(ab == simrank::cosine(b, a), where + " symmetry");
        std::vector<double> sa = a;
        double c = scale(rng);
        for (auto& x : sa) x *= c;
        check.expect(std::abs(simrank::cosine(sa, b) - ab) <= 1e-12, where + " scale invariance");
        check.expect(std::abs(simrank::cosine(a, a) - 1.0) <= 1e-12, where + " identity");
        std::vector<double> zero(d, 0.0);
        check.expect(simrank::cosine(a, zero) == 0.0 && simrank::cosine(zero, zero) == 0.0, where + " zero");
        if (d >= 2) {
            // b minus its projection on a is orthogonal to a.
            double dot = 0, na = 0;
            for (std::size_t j = 0; j < d; ++j) {
                dot += a[j] * b[j];
                na += a[j] * a[j];
            }
            std::vector<double> o = b;
            for (std::size_t j = 0; j < d; ++j) o[j] -= dot / na * a[j];
            check.expect(std::abs(simrank::cosine(a, o)) <= 1e-12, where + " orthogonality " + fmt(simrank::cosine(a, o)));
        }
        check.expect(ab >= -1.0 && ab <= 1.0, where + " range");
    }
}

// ---- 3 ---------------------------------------------------------------------

oracle::Matrix rows_of(const Eigen::MatrixXd& m) {
    oracle::Matrix out(static_cast<std::size_t>(m.rows()), std::vector<double>(static_cast<std::size_t>(m.cols())));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
    return out;
}

// Largest rank <= wanted whose singular value gap makes the rank-r subspace
// well defined.
std::size_t gapped_rank(const std::vector<double>& s, std::size_t wanted) {
    auto ok = [&](std::size_t r) {
        if (s[r - 1] <= 1e-9 * s[0]) return false;
        return r == s.size() || s[r - 1] - s[r] > 1e-3 * s[0];
    };
    for (std::size_t r = wanted; r >= 1; --r)
        if (ok(r)) return r;
    for (std::size_t r = wanted + 1; r <= s.size(); ++r)
        if (ok(r)) return r;
    return s.size();
}

void lsa_oracle(Check& check) {
    std::mt19937_64 rng(3003);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const std::string where = "matrix " + std::to_string(trial);

        // Random term-document matrix, sparse-ish nonnegative entries.
        const Eigen::Index m = 2 + static_cast<Eigen::Index>(rng() % 29);  // <= 30 terms
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng() % 19);  // <= 20 docs
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, n);
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                if (u(rng) < 0.4) a(i, j) = std::floor(u(rng) * 5.0) + 1.0;
        if (a.norm() == 0.0) a(0, 0) = 1.0;
        auto ref = oracle::full_svd(rows_of(a));
        const std::size_t p = ref.s.size();
        const std::size_t r = 1 + rng() % p;
        auto svd = linalg::randomized_svd(a, static_cast<int>(r));
        for (std::size_t i = 0; i < r; ++i) {
            double got = svd.singular(static_cast<Eigen::Index>(i));
            check.expect(std::abs(got - ref.s[i]) <= 1e-6 * ref.s[i] || (ref.s[i] < 1e-12 && got < 1e-9),
                         where + " sigma_" + std::to_string(i) + " " + fmt(got) + " vs " + fmt(ref.s[i]));
        }
        Eigen::MatrixXd approx = svd.u * svd.singular.asDiagonal() * svd.v.transpose();
        double err = (a - approx).norm();
        double ref_err = oracle::reconstruction_error(rows_of(a), ref.u, ref.s, ref.v, r);
        check.expect(std::abs(err - ref_err) <= 1e-6 * std::max(ref_err, 1e-6 * a.norm()),
                     where + " reconstruction " + fmt(err) + " vs " + fmt(ref_err));

        // LSA over random token documents against the dense oracle pipeline.
        const std::size_t docs = 2 + rng() % 19;
        const std::size_t vocab = 2 + rng() % 29;
        std::vector<embed::TokenStream> streams(docs);
        for (auto& s : streams) {
            const std::size_t len = 1 + rng() % 10;
            for (std::size_t t = 0; t < len; ++t) s.tokens.push_back("w" + std::to_string(rng() % vocab));
        }
        auto tfidf = embed::fit_tfidf(streams);
        Eigen::MatrixXd x = embed::term_document_matrix(tfidf, streams);
        auto xref = oracle::full_svd(rows_of(x));
        const std::size_t lr = gapped_rank(xref.s, 1 + rng() % xref.s.size());
        auto lsa = embed::fit_lsa(tfidf, streams, lr);
        std::vector<std::vector<double>> ref_vecs;
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            std::vector<double> proj(lr, 0.0);
            for (std::size_t c = 0; c < lr; ++c)
                for (Eigen::Index i = 0; i < x.rows(); ++i) proj[c] += xref.u[static_cast<std::size_t>(i)][c] * x(i, j);
            if (oracle::norm(proj) <= 1e-10 * x.col(j).norm()) std::fill(proj.begin(), proj.end(), 0.0);
            ref_vecs.push_back(proj);
        }
        std::vector<embed::DocVector> got;
        for (const auto& s : streams) got.push_back(embed::embed_lsa(lsa, s));
        for (std::size_t i = 0; i < docs; ++i) {
            for (std::size_t j = i; j < docs; ++j) {
                double c = simrank::cosine(got[i], got[j]);
                double cref = oracle::cosine(ref_vecs[i], ref_vecs[j]);
                check.expect(std::abs(c - cref) <= 1e-6, where + " lsa cosine (" + std::to_string(i) + "," +
                                                             std::to_string(j) + ") " + fmt(c) + " vs " + fmt(cref));
            }
        }
    }
}

// ---- 4 ---------------------------------------------------------------------

// Scores from a table; coarse values make ties common.
class RandomScorer final : public kacers::Scorer {
public:
    std::map<kacers::TextPair, double> table;
    std::string id() const override { return "random"; }
    std::vector<double> score_batch(std::span<const kacers::TextPair> pairs) override {
        std::vector<double> out;
        for (const auto& p : pairs) out.push_back(table.at(p));
        return out;
    }
};

void kacers_bruteforce(Check& check) {
    std::mt19937_64 rng(4004);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t ns = 1 + rng() % 10;
        const std::size_t nk = 1 + rng() % 3;
        const std::size_t t = 1 + rng() % 5;
        Strings sentences;
        std::string text;
        for (std::size_t j = 0; j < ns; ++j) {
            sentences.push_back("Sentence " + std::to_string(j) + " is here.");
            text += (j ? " " : "") + sentences.back();
        }
        Strings keywords;
        for (std::size_t k = 0; k < nk; ++k) keywords.push_back("keyword" + std::to_string(k));
        RandomScorer scorer;
        std::vector<std::vector<double>> rows(nk, std::vector<double>(ns));
        for (std::size_t k = 0; k < nk; ++k)
            for (std::size_t j = 0; j < ns; ++j) {
                rows[k][j] = static_cast<double>(rng() % 5) * 0.25;
                scorer.table[{keywords[k], sentences[j]}] = rows[k][j];
            }
        auto summary = kacers::summarize(text, keywords, t, scorer);

        std::vector<std::size_t> order;
        for (const auto& row : rows)
            for (auto j : oracle::brute_top_t(row, t))
                if (std::find(order.begin(), order.end(), j) == order.end()) order.push_back(j);
        std::string expected;
        for (auto j : order) expected += (expected.empty() ? "" : " ") + sentences[j];
        const std::string where = "case " + std::to_string(trial);
        check.expect(summary.sentences == sentences, where + " sentence split");
        check.expect(summary.order == order, where + " selection");
        check.expect(summary.text == expected, where + " text");
    }
}

// ---- 5 ---------------------------------------------------------------------

std::map<std::string, std::string> csv_row(const std::string& csv, const std::string& key) {
    auto lines = io::split(csv, '\n');
    auto header = io::csv_parse_line(lines.at(0));
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto cells = io::csv_parse_line(lines[i]);
        if (!cells.empty() && cells[0] == key) {
            std::map<std::string, std::string> out;
            for (std::size_t c = 0; c < cells.size() && c < header.size(); ++c) out[header[c]] = cells[c];
            return out;
        }
    }
    return {};
}

void gs14_fixture(Check& check) {
    testsupport::TempDir dir("accept_gs14");
    auto corpus_path = testsupport::fixture("gs14.json").string();
    auto corpus = corpus::load_corpus(corpus_path);
    Strings ids;
    for (const auto& t : corpus.topics()) ids.push_back(t.id);
    io::write_file(dir.path() / "embeddings.txt",
                   embed::format_vector_table(ids, testsupport::gs14_vectors(corpus)));

    auto rank = testsupport::run_cli({"rank", "--out", dir.str(), "--k", "4,10"});
    check.expect(rank.code == 0, "rank failed: " + rank.err);
    auto evaluate = testsupport::run_cli({"evaluate", "--corpus", corpus_path, "--out", dir.str(), "--k", "4,10"});
    check.expect(evaluate.code == 0, "evaluate failed: " + evaluate.err);
    if (!check.ok()) return;

    auto row = csv_row(io::read_file(dir.path() / "metrics.csv"), "GS-14");
    check.expect(row["recall@4"] == "1", "recall@4 = " + row["recall@4"]);
    check.expect(row["precision@10"] == "0.2", "precision@10 = " + row["precision@10"]);

    auto rankings = simrank::parse_rankings_jsonl(io::read_file(dir.path() / "rankings.jsonl"));
    std::vector<simrank::Ranking> gs14;
    for (const auto& r : rankings)
        if (r.query_id == "GS-14") gs14.push_back(r);
    check.expect(gs14.size() == 1, "GS-14 ranking missing");
    if (!check.ok()) return;
    Strings order;
    for (const auto& c : gs14[0].entries) order.push_back(c.id);
    check.expect(order == testsupport::gs14_order(), "GS-14 ranking order differs from the reference order");

    auto chords = kanalysis::chord_matrix(gs14, corpus, 10);
    std::map<std::string, std::uint64_t> gs_row;
    for (std::size_t h = 0; h < chords.kas.size(); ++h) {
        if (chords.kas[h] != "GS") continue;
        for (std::size_t t = 0; t < chords.kas.size(); ++t)
            if (chords.counts[h][t] > 0) gs_row[chords.kas[t]] = chords.counts[h][t];
    }
    std::map<std::string, std::uint64_t> expected = {{"GS", 5}, {"DA", 1}, {"CV", 1}, {"FC", 3}};
    check.expect(gs_row == expected, "GS chord row differs");
}

// ---- 6 ---------------------------------------------------------------------

void cluster_retrieval(Check& check) {
    auto corpus = testsupport::cluster_corpus();
    Strings ids, texts;
    auto selector = corpus::SegmentSelector::parse("title,abstract");
    for (const auto& t : corpus.topics()) {
        ids.push_back(t.id);
        texts.push_back(corpus::select_text(t, selector));
    }
    embed::BackendConfig config;
    auto run = embed::embed_documents(config, ids, texts);
    auto matrix = simrank::pairwise(ids, run.vectors);
    auto rankings = simrank::rank_all(matrix, 14);
    std::vector<std::size_t> ks;
    for (std::size_t k = 1; k <= 14; ++k) ks.push_back(k);
    auto report = eval::evaluate(rankings, corpus, ks);
    check.expect(report.macro[3].recall >= 0.95, "macro recall@4 = " + fmt(report.macro[3].recall));
    for (std::size_t i = 1; i < ks.size(); ++i) {
        check.expect(report.macro[i].recall >= report.macro[i - 1].recall,
                     "recall drops at k=" + std::to_string(ks[i]));
    }
}

// ---- 7 ---------------------------------------------------------------------

void table1_grid(Check& check) {
    testsupport::TempDir dir("accept_table1");
    auto r = testsupport::run_cli({"sweep", "--mode", "table1", "--corpus", testsupport::fixture("mini_bok.json").string(),
                                   "--out", dir.str(), "--backend", "tfidf", "--scorer", "lexical", "--k", "1,5,10"});
    check.expect(r.code == 0, "sweep failed: " + r.err);
    if (!check.ok()) return;
    auto lines = io::split(io::read_file(dir.path() / "table1.csv"), '\n');
    if (!lines.empty() && lines.back().empty()) lines.pop_back();
    check.expect(lines.size() == 5, "expected 5 lines, got " + std::to_string(lines.size()));
    if (!check.ok()) return;
    check.expect(lines[0] == "recall@10,n_abs=omit,n_abs=1,n_abs=2,n_abs=3", "header: " + lines[0]);
    const Strings rows = {"n_main=omit", "n_main=1", "n_main=2", "n_main=3"};
    std::size_t populated = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        auto cells = io::csv_parse_line(lines[i + 1]);
        check.expect(cells.size() == 5, "row " + rows[i] + " width");
        if (cells.size() != 5) continue;
        check.expect(cells[0] == rows[i], "row label " + cells[0]);
        for (std::size_t c = 1; c < 5; ++c) {
            bool undefined = i == 0 && c == 1;
            if (undefined) {
                check.expect(cells[c] == "/", "undefined cell holds " + cells[c]);
                continue;
            }
            try {
                double v = io::parse_double(cells[c], "cell");
                check.expect(v >= 0.0 && v <= 1.0, "cell out of range");
                ++populated;
            } catch (const std::exception&) {
                check.expect(false, "non-numeric cell " + cells[c]);
            }
        }
    }
    check.expect(populated == 15, "populated cells: " + std::to_string(populated));
}

// ---- 8 ---------------------------------------------------------------------

Strings pipeline(const std::string& out) {
    const std::string corpus = testsupport::fixture("mini_bok.json").string();
    std::vector<Strings> steps = {
        {"ingest", "--corpus", corpus, "--out", out},
        {"summarize", "--corpus", corpus, "--out", out, "--scorer", "lexical", "--jobs", "2"},
        {"embed", "--corpus", corpus, "--out", out, "--backend", "lsa", "--rank-r", "6", "--seed", "42",
         "--segments", "title,keyword,semantic_summary", "--jobs", "2"},
        {"rank", "--out", out, "--k", "1,3,5"},
        {"evaluate", "--corpus", corpus, "--out", out, "--k", "1,3,5"},
        {"analyze", "--corpus", corpus, "--out", out, "--k", "5", "--format", "csv"},
        {"analyze", "--corpus", corpus, "--out", out, "--k", "5", "--format", "json"},
        {"analyze", "--corpus", corpus, "--out", out, "--k", "5", "--format", "plot"}};
    Strings failures;
    for (const auto& step : steps) {
        auto r = testsupport::run_cli(step);
        if (r.code != 0) failures.push_back(step[0] + ": " + r.err);
    }
    return failures;
}

void determinism(Check& check) {
    testsupport::TempDir a("accept_det_a");
    testsupport::TempDir b("accept_det_b");
    for (const auto& f : pipeline(a.str())) check.expect(false, "first run " + f);
    for (const auto& f : pipeline(b.str())) check.expect(false, "second run " + f);
    if (!check.ok()) return;
    std::set<std::string> names_a, names_b;
    for (const auto& e : std::filesystem::directory_iterator(a.path())) names_a.insert(e.path().filename().string());
    for (const auto& e : std::filesystem::directory_iterator(b.path())) names_b.insert(e.path().filename().string());
    check.expect(names_a == names_b, "artifact sets differ");
    check.expect(names_a.size() == 13, "expected 13 artifacts, got " + std::to_string(names_a.size()));
    for (const auto& name : names_a) {
        check.expect(io::read_file(a.path() / name) == io::read_file(b.path() / name), name + " differs");
    }
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "metrics match the confusion-matrix oracle on 1000 instances", 5.0, metrics_oracle},
        {2, "cosine properties and oracle agreement on 1000 pairs", 1.0, cosine_suite},
        {3, "randomized SVD and LSA match the dense SVD oracle on 50 matrices", 30.0, lsa_oracle},
        {4, "KACERS equals exhaustive top-t enumeration on 500 cases", 5.0, kacers_bruteforce},
        {5, "GS-14 fixture: recall@4 = 1, precision@10 = 0.2, GS chord row", 0.0, gs14_fixture},
        {6, "three disjoint clusters: TF-IDF macro recall@4 >= 0.95, monotone in k", 5.0, cluster_retrieval},
        {7, "table1 sweep emits 15 populated cells with headers", 10.0, table1_grid},
        {8, "two full pipeline runs produce byte-identical artifacts", 0.0, determinism},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Check check;
        auto start = std::chrono::steady_clock::now();
        try {
            c.body(check);
        } catch (const std::exception& e) {
            check.expect(false, std::string("exception: ") + e.what());
        }
        double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool in_time = c.budget_seconds == 0.0 || seconds < c.budget_seconds;
        bool pass = check.ok() && in_time;
        failed += pass ? 0 : 1;
        char timing[64];
        if (c.budget_seconds > 0.0) {
            std::snprintf(timing, sizeof timing, "%.3fs of %.0fs", seconds, c.budget_seconds);
        } else {
            std::snprintf(timing, sizeof timing, "%.3fs", seconds);
        }
        std::cout << (pass ? "PASS" : "FAIL") << " [" << c.number << "] " << c.name << " (" << timing << ")";
        if (!check.ok()) std::cout << ": " << check.failures << " failures, first: " << check.first;
        if (!in_time) std::cout << ": over time budget";
        std::cout << "\n";
    }
    return failed == 0 ? 0 : 1;
}
