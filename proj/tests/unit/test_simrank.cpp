#include <doctest.h>

#include <cmath>
#include <random>

#include "boksim/corpus.hpp"
#include "boksim/error.hpp"
#include "boksim/simrank.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace boksim;
using namespace boksim::simrank;
using Strings = std::vector<std::string>;
using embed::DocVector;

namespace {

std::vector<std::string> ids_of(const Ranking& r) {
    std::vector<std::string> out;
    for (const auto& c : r.entries) out.push_back(c.id);
    return out;
}

}  // namespace

TEST_CASE("cosine examples") {
    std::vector<double> a = {0.6, 0.8};
    CHECK(cosine(a, a) == 1.0);
    CHECK(cosine(std::vector<double>{1, 0}, std::vector<double>{0, 1}) == 0.0);
    double expected = 32.0 / (std::sqrt(14.0) * std::sqrt(77.0));
    CHECK(cosine(std::vector<double>{1, 2, 3}, std::vector<double>{4, 5, 6}) ==
          doctest::Approx(expected).epsilon(1e-15));
    CHECK(expected == doctest::Approx(0.974632).epsilon(1e-6));
    CHECK(cosine(std::vector<double>{0, 0}, std::vector<double>{1, 2}) == 0.0);
    CHECK(cosine(std::vector<double>{-1, -2}, std::vector<double>{1, 2}) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK_THROWS_AS(cosine(std::vector<double>{1}, std::vector<double>{1, 2}), ValidationError);
}

TEST_CASE("pairwise matrix") {
    Strings one = {"A-1"};
    std::vector<DocVector> v1 = {{"x", {3, 4}}};
    auto m1 = pairwise(one, v1);
    CHECK(m1.values(0, 0) == 1.0);

    Strings ids = {"A-1", "A-2", "A-3"};
    std::vector<DocVector> basis = {{"x", {1, 0, 0}}, {"x", {0, 1, 0}}, {"x", {0, 0, 1}}};
    CHECK(pairwise(ids, basis).values == Eigen::MatrixXd::Identity(3, 3));

    std::vector<DocVector> with_zero = {{"x", {1, 0}}, {"x", {0, 0}}, {"x", {1, 1}}};
    auto mz = pairwise(ids, with_zero);
    CHECK(mz.values(1, 1) == 0.0);
    CHECK(mz.index_of("A-3") == 2);
    CHECK(mz.index_of("Z-1") == -1);

    std::mt19937_64 rng(4);
    std::normal_distribution<double> g;
    Strings five = {"A-1", "A-2", "A-3", "A-4", "A-5"};
    std::vector<DocVector> vs;
    for (int i = 0; i < 5; ++i) {
        DocVector v{"x", {}};
        for (int d = 0; d < 6; ++d) v.values.push_back(g(rng));
        vs.push_back(v);
    }
    auto m = pairwise(five, vs);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            double ref = i == j ? 1.0 : oracle::cosine(vs[i].values, vs[j].values);
            CHECK(std::abs(m.values(i, j) - ref) <= 1e-12);
            CHECK(m.values(i, j) == m.values(j, i));
        }

    std::vector<DocVector> mixed = {{"x", {1, 0}}, {"x", {1}}};
    CHECK_THROWS_AS(pairwise(Strings{"A-1", "A-2"}, mixed), ValidationError);
}

TEST_CASE("top_k ordering") {
    Strings two = {"A-1", "A-2"};
    std::vector<DocVector> v2 = {{"x", {1, 0}}, {"x", {1, 1}}};
    auto r2 = top_k(pairwise(two, v2), "A-1", 5);
    CHECK(ids_of(r2) == Strings{"A-2"});

    Strings ids = {"A", "D", "C", "B"};
    std::vector<DocVector> equal(4, DocVector{"x", {1, 1}});
    auto r = top_k(pairwise(ids, equal), "A", 2);
    CHECK(ids_of(r) == Strings{"B", "C"});
    CHECK(r.k == 2);

    auto m = pairwise(ids, equal);
    CHECK_THROWS_AS(top_k(m, "Q", 2), ValidationError);
    CHECK_THROWS_AS(top_k(m, "A", 0), ValidationError);
    CHECK(truncate(top_k(m, "A", 3), 1).entries.size() == 1);
    CHECK(rank_all(m, 2).size() == 4);
}

TEST_CASE("GS-14 candidate ordering") {
    auto corpus = corpus::load_corpus(testsupport::fixture("gs14.json"));
    Strings ids;
    for (const auto& t : corpus.topics()) ids.push_back(t.id);
    auto m = pairwise(ids, testsupport::gs14_vectors(corpus));
    auto r = top_k(m, "GS-14", 10);
    CHECK(ids_of(r) == testsupport::gs14_order());
    CHECK(ids_of(truncate(r, 4)) == Strings{"GS-11", "GS-13", "GS-12", "GS-15"});
}

TEST_CASE("rankings jsonl and matrix csv") {
    Strings ids = {"A-1", "A-2", "A-3"};
    std::vector<DocVector> vs = {{"x", {1, 0.3}}, {"x", {0.2, 1}}, {"x", {1, 1}}};
    auto m = pairwise(ids, vs);
    auto rankings = rank_all(m, 2);
    auto back = parse_rankings_jsonl(rankings_to_jsonl(rankings));
    CHECK(back == rankings);
    CHECK_THROWS_AS(parse_rankings_jsonl("{\"query\":1}\n"), ValidationError);
    auto csv = matrix_to_csv(m);
    CHECK(csv.substr(0, csv.find('\n')) == "id,A-1,A-2,A-3");
}
