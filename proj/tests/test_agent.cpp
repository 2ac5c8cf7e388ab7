#include "support/support.hpp"

#include "ragloop/agent/agent.hpp"
#include "ragloop/agent/trace_io.hpp"
#include "ragloop/retrieval/bm25_index.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace ragloop;
using namespace ragloop::agent;
using testing::final_reply;
using testing::search_reply;

namespace {

AgentTrace replay(const std::string& script, const std::string& question) {
    auto corpus = corpus::ingest_corpus(testing::data_dir() / "wiki/corpus.jsonl").corpus;
    auto index = retrieval::Bm25Index::build(corpus);
    AgentConfig cfg;
    cfg.top_k = 3;
    retrieval::Bm25Retriever retriever(index, retriever_options(cfg));
    auto backend = llm::make_scripted(llm::load_script(testing::data_dir() / "scripts" / script));
    auto trace = run_agent(question, cfg, retriever, AgentBackends::shared(backend));
    CHECK(backend->remaining() == 0);
    return trace;
}

const std::string kRussertQ = "What highway was renamed in honor of Tim Russert?";
const std::string kFalwellQ =
    "How do Jerry Falwell's beliefs about the Antichrist as a specific person contrast with Martin Wight's "
    "interpretation of the Antichrist concept after World War II?";

} // namespace

TEST_CASE("single-search trajectory replays") {
    const auto t = replay("one_search.json", kRussertQ);
    INFO(t.error.value_or(""));
    CHECK(t.terminated_by == Termination::planner_done);
    CHECK(t.search_count == 1);
    CHECK(t.step_count == 2);
    CHECK(t.final_answer.find("U.S. Route 20A") != std::string::npos);
    CHECK(t.steps[0].query() == "highway renamed in honor of Tim Russert");
    CHECK(std::find(t.steps[0].retrieved.begin(), t.steps[0].retrieved.end(), "russert") != t.steps[0].retrieved.end());
    CHECK(render_transcript(t) == render_transcript(replay("one_search.json", kRussertQ)));
}

TEST_CASE("two-search trajectory replays") {
    const auto t = replay("two_search.json", kFalwellQ);
    INFO(t.error.value_or(""));
    CHECK(t.terminated_by == Termination::planner_done);
    CHECK(t.search_count == 2);
    CHECK(t.step_count == 3);
    CHECK(t.final_answer.find("demonic concentrations of power") != std::string::npos);
}

TEST_CASE("budget caps searches over random always-search scripts") {
    std::mt19937 rng(7);
    testing::FixedRetriever retriever({testing::sample_passage()});
    for (int round = 0; round < 50; ++round) {
        const std::size_t k = 1 + rng() % 3;
        const std::size_t extra = rng() % 4;
        std::vector<std::string> planner, reflector;
        for (std::size_t i = 0; i < k + extra; ++i) {
            planner.push_back(search_reply("thought " + std::to_string(rng()), "query " + std::to_string(i)));
            reflector.push_back("evidence " + std::to_string(i));
        }
        auto p = llm::make_scripted(planner, "planner");
        auto r = llm::make_scripted(reflector, "reflector");
        auto a = llm::make_scripted(std::vector<std::string>{"answer " + std::to_string(round)}, "answerer");
        AgentConfig cfg;
        cfg.budget_k = k;
        const auto t = run_agent("q" + std::to_string(round), cfg, retriever, {p, r, a});
        REQUIRE(t.terminated_by == Termination::budget_exhausted);
        REQUIRE(t.search_count == k);
        REQUIRE(t.step_count == k + 1);
        REQUIRE(t.final_answer == "answer " + std::to_string(round));
        REQUIRE(p->calls() == k);
        REQUIRE(t.steps.back().is_final());
    }
}

TEST_CASE("planner's t-th request carries q and every earlier step in order") {
    constexpr int kSearches = 4;
    std::vector<std::string> planner;
    for (int i = 1; i <= kSearches; ++i) planner.push_back(search_reply("r" + std::to_string(i), "a" + std::to_string(i)));
    planner.push_back(final_reply());
    std::vector<std::string> evidence;
    for (int i = 1; i <= kSearches; ++i) evidence.push_back("e" + std::to_string(i));
    auto p = llm::make_scripted(planner);
    auto r = llm::make_scripted(evidence);
    auto a = llm::make_scripted(std::vector<std::string>{"done"});
    testing::FixedRetriever retriever({testing::sample_passage()});
    const auto t = run_agent("q", AgentConfig{}, retriever, {p, r, a});
    REQUIRE(t.ok());

    const auto transcript = p->transcript();
    REQUIRE(transcript.size() == kSearches + 1);
    const auto system = prompts::PromptRegistry::builtin().render(prompts::TemplateId::train_solve, {});
    for (std::size_t turn = 1; turn <= transcript.size(); ++turn) {
        std::vector<llm::ChatMessage> expected{llm::system_message(system), llm::user_message("q")};
        for (std::size_t i = 1; i < turn; ++i) {
            const auto n = std::to_string(i);
            expected.push_back(llm::assistant_message("### Thought: r" + n + "\n### Action - Search Input: a" + n));
            expected.push_back(llm::user_message("### Evidence: e" + n));
        }
        CHECK(transcript[turn - 1].messages == expected);
    }
}

TEST_CASE("repeated queries reuse cached evidence and still count") {
    auto p = llm::make_scripted({search_reply("t", "Same Query"), search_reply("t2", "same   query"), final_reply()});
    auto r = llm::make_scripted(std::vector<std::string>{"### Evidence: cached fact"});
    auto a = llm::make_scripted(std::vector<std::string>{"ans"});
    testing::FixedRetriever retriever({testing::sample_passage()});
    const auto t = run_agent("q", AgentConfig{}, retriever, {p, r, a});
    REQUIRE(t.ok());
    CHECK(t.search_count == 2);
    CHECK(r->calls() == 1);
    CHECK(t.steps[0].evidence == std::optional<std::string>("cached fact"));
    CHECK(t.steps[1].repeated_query);
    CHECK(t.steps[1].evidence == t.steps[0].evidence);
}

TEST_CASE("empty retrieval yields the sentinel without a reflector call") {
    auto corpus = testing::toy_corpus();
    auto index = retrieval::Bm25Index::build(corpus);
    retrieval::Bm25Retriever retriever(index, {});
    auto p = llm::make_scripted({search_reply("t", "zebra"), final_reply()});
    auto r = llm::make_scripted(std::vector<std::string>{"unused"});
    auto a = llm::make_scripted(std::vector<std::string>{"ans"});
    const auto t = run_agent("q", AgentConfig{}, retriever, {p, r, a});
    REQUIRE(t.ok());
    CHECK(r->calls() == 0);
    CHECK(t.steps[0].evidence == std::optional<std::string>(std::string(kNoInformation)));
}

TEST_CASE("unusable planner output is retried, then fails with a partial trace") {
    auto p = llm::make_scripted({search_reply("t", "q1"), "rambling", "more rambling", "still nothing"});
    auto r = llm::make_scripted(std::vector<std::string>{"e1"});
    auto a = llm::make_scripted(std::vector<std::string>{"ans"});
    testing::FixedRetriever retriever({testing::sample_passage()});
    AgentConfig cfg;
    cfg.max_planner_parse_retries = 2;
    const auto t = run_agent("q", cfg, retriever, {p, r, a});
    CHECK(t.terminated_by == Termination::failed);
    REQUIRE(t.error.has_value());
    CHECK(t.error->find("unparseable") != std::string::npos);
    CHECK(t.steps.size() == 1);
    CHECK(t.search_count == 1);
    CHECK(t.final_answer.empty());
    const auto last = p->transcript().back().messages;
    CHECK(last.back().content == std::string(kFormatCorrection));
}

TEST_CASE("a retried planner reply recovers") {
    auto p = llm::make_scripted({"no headers", final_reply()});
    auto r = llm::make_scripted(std::vector<std::string>{"unused"});
    auto a = llm::make_scripted(std::vector<std::string>{"ans"});
    testing::FixedRetriever retriever({testing::sample_passage()});
    const auto t = run_agent("q", AgentConfig{}, retriever, {p, r, a});
    CHECK(t.ok());
    CHECK(t.search_count == 0);
    CHECK(t.step_count == 1);
}

TEST_CASE("backend failure mid-run keeps executed steps") {
    auto p = llm::make_scripted({search_reply("t", "q1"), search_reply("t", "q2")});
    auto r = llm::make_scripted(std::vector<std::string>{"e1"});
    auto a = llm::make_scripted(std::vector<std::string>{"ans"});
    testing::FixedRetriever retriever({testing::sample_passage()});
    const auto t = run_agent("q", AgentConfig{}, retriever, {p, r, a});
    CHECK(t.terminated_by == Termination::failed);
    CHECK(t.search_count == 1);
    CHECK(t.steps.size() == 1);
}

TEST_CASE("evidence truncation respects utf-8 boundaries") {
    auto p = llm::make_scripted({search_reply("t", "q1"), final_reply()});
    auto r = llm::make_scripted(std::vector<std::string>{"ab\xC3\xA9xyz"});
    auto a = llm::make_scripted(std::vector<std::string>{"ans"});
    testing::FixedRetriever retriever({testing::sample_passage()});
    AgentConfig cfg;
    cfg.evidence_char_limit = 3;
    const auto t = run_agent("q", cfg, retriever, {p, r, a});
    REQUIRE(t.ok());
    CHECK(t.steps[0].evidence == std::optional<std::string>("ab"));
}

TEST_CASE("reflector prompt and sentinel handling") {
    auto r = llm::make_scripted(std::vector<std::string>{"no information found"});
    const auto e = reflect_evidence("q", {testing::sample_passage()}, *r);
    CHECK(e == kNoInformation);
    const auto prompt = r->transcript()[0].messages[0].content;
    CHECK(prompt.find("Search query: q") != std::string::npos);
    CHECK(prompt.find("[1] Sample\nThe sample passage") != std::string::npos);
}

TEST_CASE("config validation") {
    AgentConfig cfg;
    CHECK(cfg.search_cap() == cfg.safety_cap);
    cfg.budget_k = 3;
    CHECK(cfg.search_cap() == 3);
    cfg.budget_k = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.budget_k.reset();
    cfg.top_k = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
