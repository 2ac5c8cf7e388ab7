#include "support/oracles.hpp"
#include "support/support.hpp"

#include "ragloop/retrieval/bm25_index.hpp"
#include "ragloop/retrieval/retriever.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace ragloop;
using namespace ragloop::retrieval;
using Catch::Matchers::WithinAbs;

TEST_CASE("toy corpus: score of cat in d1 is ln 2") {
    auto index = Bm25Index::build(testing::toy_corpus());
    CHECK_THAT(index.score({"cat"}, "d1"), WithinAbs(std::log(2.0), 1e-9));
    CHECK(index.score({"cat"}, "d2") == 0.0);
    CHECK_THAT(index.idf("cat"), WithinAbs(std::log(2.0), 1e-12));
    CHECK(index.doc_freq("sat") == 2);
}

TEST_CASE("search drops zero scores and breaks ties by id") {
    auto index = Bm25Index::build(testing::toy_corpus());
    auto res = index.search("sat", 10);
    REQUIRE(res.hits.size() == 2);
    CHECK(res.hits[0].passage_id == "d1");
    CHECK(res.hits[1].passage_id == "d2");
    CHECK(res.hits[0].sparse_score == res.hits[1].sparse_score);
    CHECK(index.search("unicorn", 10).hits.empty());
    CHECK_THROWS_AS(index.search("cat", 0), std::invalid_argument);
}

TEST_CASE("repeated query terms count once per occurrence") {
    auto index = Bm25Index::build(testing::toy_corpus());
    CHECK_THAT(index.score({"cat", "cat"}, "d1"), WithinAbs(2 * std::log(2.0), 1e-12));
}

TEST_CASE("full ranking equals brute force on random corpora") {
    const std::vector<std::string> vocab{"alpha", "beta", "gamma", "delta", "eps", "zeta", "eta", "theta"};
    std::mt19937 rng(20240611);
    for (int round = 0; round < 20; ++round) {
        const int n_docs = std::uniform_int_distribution<int>(1, 12)(rng);
        oracle::Bm25Oracle oracle;
        std::vector<corpus::Passage> passages;
        for (int d = 0; d < n_docs; ++d) {
            const int len = std::uniform_int_distribution<int>(1, 10)(rng);
            std::vector<std::string> toks;
            for (int t = 0; t < len; ++t) toks.push_back(vocab[rng() % vocab.size()]);
            const auto id = "doc" + std::to_string(d);
            passages.push_back({id, "", oracle::join(toks), {}});
            oracle.ids.push_back(id);
            oracle.docs.push_back(toks);
        }
        auto index = Bm25Index::build(testing::make_corpus(passages));
        for (int q = 0; q < 5; ++q) {
            std::vector<std::string> query;
            const int qlen = std::uniform_int_distribution<int>(1, 3)(rng);
            for (int t = 0; t < qlen; ++t) query.push_back(vocab[rng() % vocab.size()]);
            const auto expected = oracle.rank(query);
            const auto got = index.search(oracle::join(query), passages.size());
            REQUIRE(got.hits.size() == expected.size());
            for (std::size_t i = 0; i < expected.size(); ++i) {
                CHECK(got.hits[i].passage_id == expected[i].first);
                CHECK_THAT(got.hits[i].sparse_score, WithinAbs(expected[i].second, 1e-9));
            }
        }
    }
}

TEST_CASE("top_k truncates the ranking") {
    auto index = Bm25Index::build(testing::make_corpus(
        {{"a", "", "x y", {}}, {"b", "", "x x y", {}}, {"c", "", "x", {}}, {"d", "", "y", {}}}));
    auto all = index.search("x", 10);
    auto top = index.search("x", 2);
    REQUIRE(top.hits.size() == 2);
    CHECK(top.hits[0] == all.hits[0]);
    CHECK(top.hits[1] == all.hits[1]);
}

TEST_CASE("empty corpus is rejected") {
    CHECK_THROWS_AS(Bm25Index::build(std::make_shared<corpus::Corpus>()), ConfigError);
}

TEST_CASE("index save and load round trip") {
    testing::TempDir dir;
    auto corpus = testing::make_corpus(
        {{"a", "Alpha", "first text here", {"b"}}, {"b", "", "second text", {}}});
    auto index = Bm25Index::build(corpus);
    index.save(dir / "idx");
    auto loaded = Bm25Index::load(dir / "idx");
    CHECK(loaded == index);
    CHECK(loaded.corpus().at("a").links == std::vector<std::string>{"b"});
    CHECK(loaded.search("text", 5) == index.search("text", 5));

    text::TokenizerConfig other;
    other.lowercase = false;
    CHECK_THROWS_AS(Bm25Index::load(dir / "idx", other), IndexFormatError);
    testing::write_file(dir / "bad", "garbage");
    CHECK_THROWS(Bm25Index::load(dir / "bad"));
}

TEST_CASE("oracle retrieval returns gold passages in order") {
    ReferenceMap refs{{"q1", {"b", "a"}}};
    auto res = oracle_retrieve("q1", refs);
    REQUIRE(res.hits.size() == 2);
    CHECK(res.hits[0].passage_id == "b");
    CHECK(res.hits[0].sparse_score == kOracleScore);
    CHECK_THROWS_AS(oracle_retrieve("q2", refs), UnmappedQuestion);

    OracleRetriever retriever(testing::toy_corpus(), {"d2"});
    auto docs = retriever.retrieve("anything at all");
    REQUIRE(docs.passages.size() == 1);
    CHECK(docs.passages[0].id == "d2");
}

TEST_CASE("bm25 retriever attaches passages in hit order") {
    auto index = Bm25Index::build(testing::toy_corpus());
    Bm25RetrieverOptions opts;
    opts.top_k = 1;
    Bm25Retriever retriever(index, opts);
    auto docs = retriever.retrieve("dog");
    REQUIRE(docs.passages.size() == 1);
    CHECK(docs.passages[0].id == "d2");
    CHECK(docs.result.hits[0].passage_id == "d2");
}
