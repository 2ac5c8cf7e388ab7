#include "support/oracles.hpp"

#include "ragloop/eval/metrics.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace ragloop;
using namespace ragloop::eval;
using Catch::Matchers::WithinAbs;

namespace {

using Golds = std::vector<std::string>;

std::string random_text(std::mt19937& rng, std::size_t max_len) {
    static const std::vector<std::string> vocab{"the", "a", "an", "Cat", "cat", "dog,", "sat", "on",
                                                "mat.", "red", "big", "(the)", "it's", "ran", "Mat", "dog"};
    const std::size_t len = rng() % (max_len + 1);
    std::string out;
    for (std::size_t i = 0; i < len; ++i) out += (i ? " " : "") + vocab[rng() % vocab.size()];
    return out;
}

} // namespace

TEST_CASE("normalization") {
    CHECK(normalize_answer("  The Cat, sat!  ") == "cat sat");
    CHECK(normalize_answer("An apple a day") == "apple day");
    CHECK(normalize_answer(normalize_answer("A  B.c")) == normalize_answer("A  B.c"));
    CHECK(normalize_answer("caf\xC3\xA9") == "caf\xC3\xA9");
}

TEST_CASE("exact match, f1 and acc hand cases") {
    CHECK(exact_match("The Eiffel Tower", Golds{"eiffel tower"}) == 1);
    CHECK(exact_match("Eiffel", Golds{"eiffel tower", "Eiffel"}) == 1);
    CHECK(exact_match("Paris France", Golds{"Paris"}) == 0);
    CHECK_THAT(token_f1("the cat sat", Golds{"cat sat down"}), WithinAbs(0.8, 1e-12));
    CHECK(token_f1("", Golds{"the"}) == 1.0);
    CHECK(token_f1("cat", Golds{"the"}) == 0.0);
    CHECK(accuracy_contains("It is the Eiffel Tower in Paris", Golds{"eiffel tower"}) == 1);
    CHECK(accuracy_contains("Paris", Golds{"eiffel tower"}) == 0);
    CHECK_THROWS_AS(exact_match("x", Golds{}), std::invalid_argument);
    CHECK_THROWS_AS(token_f1("x", Golds{}), std::invalid_argument);
    CHECK_THROWS_AS(accuracy_contains("x", Golds{}), std::invalid_argument);
}

TEST_CASE("rouge-l and bleu hand cases") {
    CHECK_THAT(rouge_l("the cat sat", "the cat sat on the mat"), WithinAbs(2.0 / 3.0, 1e-12));
    CHECK_THAT(bleu("the the the the", "the cat", 1), WithinAbs(0.25, 1e-12));
    CHECK_THAT(bleu("the cat", "the cat sat", 1), WithinAbs(std::exp(-0.5), 1e-12));
    CHECK_THAT(bleu("the cat", "the cat sat", 1), WithinAbs(0.6065, 1e-4));
    CHECK(bleu("", "the cat") == 0.0);
    CHECK(bleu("dog", "the cat") == 0.0);
    CHECK_THAT(bleu("a b c d", "a b c d"), WithinAbs(1.0, 1e-12));
    CHECK(rouge_l("", "x") == 0.0);
    CHECK_THROWS_AS(bleu("a", "a", 0), std::invalid_argument);
}

TEST_CASE("long-form metrics are directional") {
    const auto pr = rouge_l_components("the cat sat", "the cat sat on the mat");
    const auto rp = rouge_l_components("the cat sat on the mat", "the cat sat");
    CHECK(pr.precision == rp.recall);
    CHECK(pr.recall == rp.precision);
    CHECK(pr.precision != pr.recall);
    CHECK(bleu("the cat sat", "the cat sat on the mat") != bleu("the cat sat on the mat", "the cat sat"));
}

TEST_CASE("metrics agree with brute-force references on random pairs") {
    std::mt19937 rng(12345);
    for (int i = 0; i < 200; ++i) {
        const auto pred = random_text(rng, 9);
        Golds golds{random_text(rng, 9)};
        if (rng() % 3 == 0) golds.push_back(random_text(rng, 6));
        INFO("pred='" << pred << "' gold='" << golds[0] << "'");
        REQUIRE(normalize_answer(pred) == oracle::normalize(pred));
        REQUIRE(exact_match(pred, golds) == oracle::em(pred, golds));
        REQUIRE(accuracy_contains(pred, golds) == oracle::acc(pred, golds));
        REQUIRE_THAT(token_f1(pred, golds), WithinAbs(oracle::f1(pred, golds), 1e-12));
        REQUIRE_THAT(rouge_l(pred, golds[0]), WithinAbs(oracle::rouge_l(pred, golds[0]), 1e-12));
        for (int n = 1; n <= 4; ++n)
            REQUIRE_THAT(bleu(pred, golds[0], n), WithinAbs(oracle::bleu(pred, golds[0], n), 1e-12));
    }
}

TEST_CASE("metric ranges") {
    std::mt19937 rng(99);
    for (int i = 0; i < 100; ++i) {
        const auto a = random_text(rng, 8), b = random_text(rng, 8);
        for (double v : {token_f1(a, Golds{b}), rouge_l(a, b), bleu(a, b)}) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
        CHECK(exact_match(a, Golds{a}) == 1);
        CHECK(token_f1(a, Golds{a}) == 1.0);
    }
}
