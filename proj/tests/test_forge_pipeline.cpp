#include "support/support.hpp"

#include "ragloop/agent/agent.hpp"
#include "ragloop/forge/pipeline.hpp"
#include "ragloop/forge/records.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace ragloop;
using namespace ragloop::forge;
using testing::final_reply;
using testing::search_reply;

namespace {

corpus::Passage passage(const std::string& id, const std::string& title = "") {
    return {id, title.empty() ? "Title " + id : title, "Text of " + id + ".", {}};
}

std::vector<corpus::Passage> linked(int n) {
    std::vector<corpus::Passage> out;
    for (int i = 1; i <= n; ++i) out.push_back(passage("l" + std::to_string(i)));
    return out;
}

GeneratedQuestion question_for(const PassagePair& pair) {
    return {"Who wrote the report?", "The committee wrote the report.", HopMode::single_hop, pair};
}

/// Annotation with `searches` search steps that went through the annotator.
SolutionAnnotation annotated(std::size_t searches, int score = 5) {
    std::vector<std::string> script;
    for (std::size_t i = 0; i < searches; ++i) {
        script.push_back(search_reply("thought " + std::to_string(i), "query " + std::to_string(i)));
        script.push_back("### Evidence: fact " + std::to_string(i));
    }
    script.push_back(final_reply("The committee wrote it."));
    auto b = llm::make_scripted(script);
    auto ann = annotate_solution(question_for({passage("m"), {passage("s")}}), *b);
    ann.verification_score = score;
    return ann;
}

} // namespace

TEST_CASE("selection keeps at most five, in order") {
    auto b = llm::make_scripted(std::vector<std::string>{"l7\nl2\n- [l1]\n3. l3\nl4\nl5"});
    auto sel = select_supporting(passage("m"), linked(7), *b);
    REQUIRE(sel.pair.supporting.size() == kMaxSupporting);
    CHECK(sel.pair.supporting[0].id == "l7");
    CHECK(sel.pair.supporting[2].id == "l1");
    CHECK(sel.pair.supporting[3].id == "l3");
    REQUIRE(sel.warnings.size() == 1);
    CHECK(sel.warnings[0].find("l5") != std::string::npos);
    const auto prompt = b->transcript()[0].messages[0].content;
    CHECK(prompt.find("[l1] Title l1\nText of l1.") != std::string::npos);
}

TEST_CASE("selection matches titles and warns on unknown names") {
    auto b = llm::make_scripted(std::vector<std::string>{"title l2, ghost, l2, m"});
    auto lk = linked(2);
    lk.push_back(passage("m"));
    auto sel = select_supporting(passage("m"), lk, *b);
    REQUIRE(sel.pair.supporting.size() == 1);
    CHECK(sel.pair.supporting[0].id == "l2");
    CHECK(sel.warnings.size() == 2);
}

TEST_CASE("selection: NONE, no links and empty replies") {
    auto none = llm::make_scripted(std::vector<std::string>{"NONE."});
    CHECK(select_supporting(passage("m"), linked(2), *none).pair.supporting.empty());

    auto unused = llm::make_scripted(std::vector<std::string>{"l1"});
    CHECK(select_supporting(passage("m"), {}, *unused).pair.supporting.empty());
    CHECK(unused->calls() == 0);

    auto empty = llm::make_scripted(std::vector<std::string>{"  ", "\n"});
    CHECK_THROWS_AS(select_supporting(passage("m"), linked(1), *empty, 1), ForgeParseError);
    CHECK(empty->calls() == 2);
}

TEST_CASE("question generation for both modes") {
    PassagePair pair{passage("m"), {passage("s1"), passage("s2")}};
    auto b = llm::make_scripted(std::vector<std::string>{"### Question: What is m?\n### Answer: It is\na thing."});
    auto q = generate_question(pair, HopMode::multi_hop, *b);
    CHECK(q.question == "What is m?");
    CHECK(q.reference_answer == "It is\na thing.");
    CHECK(q.mode == HopMode::multi_hop);
    const auto t = b->transcript()[0];
    CHECK(t.params.temperature == 0.7);
    CHECK(t.messages[0].content.find("Supporting passages:\n[1] Title s1") != std::string::npos);

    auto single = llm::make_scripted(std::vector<std::string>{"Question: Q?\nAnswer: A."});
    auto sq = generate_question({passage("m"), {}}, HopMode::single_hop, *single);
    CHECK(sq.reference_answer == "A.");
    CHECK(single->transcript()[0].messages[0].content.find("Passage:\nText of m.") != std::string::npos);

    CHECK_THROWS_AS(generate_question({passage("m"), {}}, HopMode::multi_hop, *single), std::invalid_argument);
    auto bad = llm::make_scripted(std::vector<std::string>{"### Question: only", "still no answer"});
    CHECK_THROWS_AS(generate_question(pair, HopMode::single_hop, *bad, 1), ForgeParseError);
}

TEST_CASE("annotation with one and two searches") {
    for (std::size_t n : {1u, 2u}) {
        const auto ann = annotated(n);
        REQUIRE(ann.ok());
        CHECK(ann.search_count() == n);
        CHECK(ann.well_formed());
        CHECK(ann.terminal_thought_present);
        CHECK(ann.final_answer == "The committee wrote it.");
        CHECK(ann.thoughts().size() == n + 1);
        CHECK(ann.evidence()[0] == "fact 0");
        CHECK(ann.steps[0].retrieved == std::vector<std::string>{"m", "s"});
    }
}

TEST_CASE("annotation prompt replays history") {
    auto b = llm::make_scripted({search_reply("t1", "q1"), "fact one", final_reply("done")});
    annotate_solution(question_for({passage("m"), {}}), *b);
    const auto t = b->transcript();
    REQUIRE(t.size() == 3);
    CHECK(t[0].messages[0].content.find("Previous steps:\n(none)") != std::string::npos);
    CHECK(t[1].messages[0].content.find("Search query: q1") != std::string::npos);
    CHECK(t[2].messages[0].content.find(
              "Step 1:\n### Thought: t1\n### Action - Search Input: q1\n### Evidence: fact one") != std::string::npos);
}

TEST_CASE("annotation failures are recorded, not thrown") {
    AnnotateOptions opts;
    opts.max_steps = 3;
    auto loop = llm::make_scripted({search_reply("a", "1"), "e", search_reply("b", "2"), "e", search_reply("c", "3"), "e"});
    auto ann = annotate_solution(question_for({passage("m"), {}}), *loop, opts);
    REQUIRE(ann.failure.has_value());
    CHECK(ann.failure->kind == FailureKind::max_steps);
    CHECK(ann.search_count() == 3);

    auto no_terminal = llm::make_scripted(std::vector<std::string>{"### Thought: done\n### Action - Final Answer: x"});
    auto nt = annotate_solution(question_for({passage("m"), {}}), *no_terminal);
    CHECK(nt.failure->kind == FailureKind::no_terminal);

    auto empty_answer = llm::make_scripted(std::vector<std::string>{final_reply()});
    CHECK(annotate_solution(question_for({passage("m"), {}}), *empty_answer).failure->kind == FailureKind::parse);

    auto garbage = llm::make_scripted(std::vector<std::string>{"x", "y"});
    CHECK(annotate_solution(question_for({passage("m"), {}}), *garbage).failure->kind == FailureKind::parse);

    auto exhausted = llm::make_scripted(std::vector<std::string>{search_reply("t", "q")});
    auto ex = annotate_solution(question_for({passage("m"), {}}), *exhausted);
    CHECK(ex.failure->kind == FailureKind::backend);
    CHECK(ex.steps.empty());
}

TEST_CASE("verification keeps scores of four and five") {
    for (auto [score, keep] : std::vector<std::pair<int, bool>>{{5, true}, {4, true}, {3, false}, {0, false}}) {
        auto j = llm::make_scripted(std::vector<std::string>{"Score: " + std::to_string(score)});
        const auto v = verify_annotation("q", "p", "r", *j);
        CHECK(v.score == score);
        CHECK(v.keep == keep);
    }
}

TEST_CASE("records: masks follow assistant turns") {
    const auto ann = annotated(1);
    const auto recs = emit_training_records(ann);
    for (const auto& r : recs) {
        REQUIRE(r.response_mask.size() == r.turns.size());
        for (std::size_t i = 0; i < r.turns.size(); ++i)
            CHECK(r.response_mask[i] == (r.turns[i].role == llm::Role::assistant));
    }
    const auto& planner = recs[0];
    CHECK(planner.kind == RecordKind::planner);
    CHECK(std::count(planner.response_mask.begin(), planner.response_mask.end(), true) == 2);
    REQUIRE(planner.turns.size() == 5);
    CHECK(planner.turns[0].role == llm::Role::system);
    CHECK(planner.turns[1].content == "Who wrote the report?");
    CHECK(planner.turns[2].content == "### Thought: thought 0\n### Action - Search Input: query 0");
    CHECK(planner.turns[3].content == "### Evidence: fact 0");
    CHECK(planner.turns[4].content == std::string(kTerminalTurn));
    CHECK_NOTHROW(llm::validate_conversation(planner.turns));

    CHECK(recs[1].kind == RecordKind::final_answer);
    CHECK(recs[1].turns.back().content == "The committee wrote it.");
    CHECK(recs[1].turns[0].content.find("[1] fact 0") != std::string::npos);
    CHECK(recs[2].kind == RecordKind::reflector);
    CHECK(recs[2].turns.size() == 2);

    const auto two = emit_training_records(annotated(2));
    CHECK(std::count(two[0].response_mask.begin(), two[0].response_mask.end(), true) == 3);
    CHECK(two[2].turns.size() == 4);
    for (const auto& r : two) CHECK(record_from_json(to_json(r)) == r);
}

TEST_CASE("records are refused for unusable annotations") {
    CHECK_THROWS_AS(emit_training_records(annotated(1, 3)), std::invalid_argument);
    auto unverified = annotated(1);
    unverified.verification_score.reset();
    CHECK_THROWS_AS(emit_training_records(unverified), std::invalid_argument);
    auto no_search = llm::make_scripted(std::vector<std::string>{final_reply("x")});
    auto ns = annotate_solution(question_for({passage("m"), {}}), *no_search);
    ns.verification_score = 5;
    CHECK_THROWS_AS(emit_training_records(ns), std::invalid_argument);
}

TEST_CASE("masked loss") {
    CHECK(masked_loss({-0.5, -1.0, -2.0}, {false, true, true}) == 3.0);
    CHECK(masked_loss({}, {}) == 0.0);
    CHECK_THROWS_AS(masked_loss({-1.0}, {true, false}), std::invalid_argument);
    CHECK_THROWS_AS(masked_loss({0.5}, {true}), std::invalid_argument);
    CHECK_THROWS_AS(masked_loss({std::nan("")}, {false}), std::invalid_argument);

    std::mt19937 rng(3);
    std::uniform_real_distribution<double> lp(-5.0, 0.0);
    for (int i = 0; i < 100; ++i) {
        const std::size_t n = 1 + rng() % 20;
        std::vector<double> v(n);
        std::vector<bool> a(n), b(n), both(n);
        for (std::size_t k = 0; k < n; ++k) {
            v[k] = lp(rng);
            const auto side = rng() % 3;
            a[k] = side == 0;
            b[k] = side == 1;
            both[k] = a[k] || b[k];
        }
        CHECK_THAT(masked_loss(v, both), Catch::Matchers::WithinAbs(masked_loss(v, a) + masked_loss(v, b), 1e-12));
    }
}

TEST_CASE("question types") {
    CHECK(question_type("How does it work?") == "how");
    CHECK(question_type("  what's that") == "what");
    CHECK(question_type("Who") == "who");
    CHECK(question_type("In which year?") == "other");
    CHECK(question_type("") == "other");
    const auto stats = question_type_stats({"Why?", "why not", "Where is it", "Is it?"});
    CHECK(stats == std::map<std::string, std::size_t>{{"why", 2}, {"where", 1}, {"other", 1}});
}

TEST_CASE("annotation json round trip") {
    const auto ann = annotated(2);
    CHECK(annotation_from_json(to_json(ann)) == ann);
    testing::TempDir dir;
    save_annotations(dir / "a.jsonl", {ann, annotated(1, 3)});
    const auto back = load_annotations(dir / "a.jsonl");
    REQUIRE(back.size() == 2);
    CHECK(back[0] == ann);
}
