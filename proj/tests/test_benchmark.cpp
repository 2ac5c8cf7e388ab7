#include "support/support.hpp"

#include "ragloop/eval/benchmark.hpp"

#include <catch_amalgamated.hpp>

using namespace ragloop;
using namespace ragloop::eval;
using testing::final_reply;
using testing::search_reply;

namespace {

std::vector<QAExample> three_examples() {
    return {{"ex-3", "question three", {"gamma"}, std::vector<std::string>{"p1"}},
            {"ex-1", "question one", {"alpha"}, std::vector<std::string>{"p1"}},
            {"ex-2", "question two", {"beta"}, std::vector<std::string>{"p1"}}};
}

/// Planner searches 1, 2 and 3 times for the examples in id order.
EvalBackends stepped_backends() {
    std::vector<std::string> planner;
    std::vector<std::string> evidence;
    for (int searches = 1; searches <= 3; ++searches) {
        for (int s = 0; s < searches; ++s) {
            planner.push_back(search_reply("t", "query " + std::to_string(searches) + "." + std::to_string(s)));
            evidence.push_back("evidence " + std::to_string(s));
        }
        planner.push_back(final_reply());
    }
    EvalBackends b;
    b.agent = {llm::make_scripted(planner, "planner"), llm::make_scripted(evidence, "reflector"),
               llm::make_scripted(std::vector<std::string>{"alpha", "the beta", "wrong"}, "answerer")};
    return b;
}

} // namespace

TEST_CASE("mean steps is searches plus one") {
    testing::FixedRetriever retriever({testing::sample_passage()});
    BenchmarkContext ctx;
    ctx.retriever = &retriever;
    ctx.backends = stepped_backends();
    BenchmarkConfig cfg;
    const auto report = run_benchmark(three_examples(), cfg, ctx);
    REQUIRE(report.rows.size() == 3);
    CHECK(report.rows[0].id == "ex-1");
    CHECK(report.rows[0].search_count == 1);
    CHECK(report.rows[2].search_count == 3);
    CHECK(report.aggregates.at("steps") == 3.0);
    CHECK(report.aggregates.at("em") == Catch::Approx(2.0 / 3.0));
    CHECK(report.n_failed == 0);
    CHECK_FALSE(report.has_errors());
    CHECK(report.config["workers"] == 1);
}

TEST_CASE("limit takes the first examples by id") {
    testing::FixedRetriever retriever({testing::sample_passage()});
    BenchmarkContext ctx;
    ctx.retriever = &retriever;
    ctx.backends = stepped_backends();
    BenchmarkConfig cfg;
    cfg.sample_limit = 2;
    const auto report = run_benchmark(three_examples(), cfg, ctx);
    REQUIRE(report.rows.size() == 2);
    CHECK(report.n_examples == 2);
    CHECK(report.rows[1].id == "ex-2");
    CHECK(report.aggregates.at("steps") == 2.5);
}

TEST_CASE("failed examples are recorded and excluded from means") {
    testing::FixedRetriever retriever({testing::sample_passage()});
    BenchmarkContext ctx;
    ctx.retriever = &retriever;
    ctx.backends.agent = agent::AgentBackends::shared(
        llm::make_scripted({final_reply(), "alpha", "garbage", "garbage", "garbage"}));
    BenchmarkConfig cfg;
    cfg.sample_limit = 2;
    const auto report = run_benchmark(three_examples(), cfg, ctx);
    REQUIRE(report.rows.size() == 2);
    CHECK_FALSE(report.rows[0].error.has_value());
    CHECK(report.rows[1].error.has_value());
    CHECK_FALSE(report.rows[1].em.has_value());
    CHECK(report.n_failed == 1);
    CHECK(report.has_errors());
    CHECK(report.aggregates.at("em") == 1.0);
    CHECK(report.counts.at("em") == 1);
    CHECK(report.aggregates.at("steps") == 1.0);
}

TEST_CASE("oracle retrieval feeds the gold passages") {
    auto passages = testing::make_corpus({{"g1", "Gold", "the gold passage text", {}}});
    BenchmarkContext ctx;
    ctx.passages = passages;
    auto reflector = llm::make_scripted(std::vector<std::string>{"gold fact"}, "reflector");
    ctx.backends.agent = {llm::make_scripted({search_reply("t", "anything"), final_reply()}), reflector,
                          llm::make_scripted(std::vector<std::string>{"alpha"})};
    BenchmarkConfig cfg;
    cfg.oracle_retrieval = true;
    std::vector<QAExample> ds{{"x", "q", {"alpha"}, std::vector<std::string>{"g1"}}};
    const auto report = run_benchmark(ds, cfg, ctx);
    REQUIRE(report.rows.size() == 1);
    CHECK(report.traces[0].steps[0].retrieved == std::vector<std::string>{"g1"});
    CHECK(reflector->transcript()[0].messages[0].content.find("the gold passage text") != std::string::npos);

    ds[0].gold_passages.reset();
    CHECK_THROWS_AS(run_benchmark(ds, cfg, ctx), ConfigError);
    ds[0].gold_passages = std::vector<std::string>{"missing"};
    CHECK_THROWS_AS(run_benchmark(ds, cfg, ctx), ConfigError);
}

TEST_CASE("missing backends are configuration errors") {
    testing::FixedRetriever retriever({testing::sample_passage()});
    BenchmarkContext ctx;
    ctx.retriever = &retriever;
    BenchmarkConfig cfg;
    CHECK_THROWS_AS(run_benchmark(three_examples(), cfg, ctx), ConfigError);
    ctx.backends = stepped_backends();
    cfg.metrics.insert(Metric::judge);
    CHECK_THROWS_AS(run_benchmark(three_examples(), cfg, ctx), ConfigError);
    cfg.metrics = {Metric::em};
    cfg.extract_short = true;
    CHECK_THROWS_AS(run_benchmark(three_examples(), cfg, ctx), ConfigError);
    ctx.retriever = nullptr;
    cfg.extract_short = false;
    CHECK_THROWS_AS(run_benchmark(three_examples(), cfg, ctx), ConfigError);
}

TEST_CASE("judge, long-form metrics and short-answer extraction") {
    testing::FixedRetriever retriever({testing::sample_passage()});
    BenchmarkContext ctx;
    ctx.retriever = &retriever;
    ctx.backends.agent = agent::AgentBackends::shared(llm::make_scripted(
        {final_reply(), "The answer is alpha indeed.", final_reply(), "Beta it is."}));
    ctx.backends.judge = llm::make_scripted(std::vector<std::string>{"Score: 5", "nonsense", "nope", "nah"});
    ctx.backends.extractor = llm::make_scripted(std::vector<std::string>{"alpha", "beta"});
    BenchmarkConfig cfg;
    cfg.metrics = {Metric::em, Metric::rouge_l, Metric::bleu, Metric::judge};
    cfg.extract_short = true;
    cfg.sample_limit = 2;
    const auto report = run_benchmark(three_examples(), cfg, ctx);
    REQUIRE(report.rows.size() == 2);
    CHECK(report.rows[0].short_answer == std::optional<std::string>("alpha"));
    CHECK(report.rows[0].em == 1.0);
    CHECK(report.rows[1].em == 1.0);
    CHECK(report.rows[0].judge_score == 5.0);
    CHECK_FALSE(report.rows[1].judge_score.has_value());
    CHECK(report.rows[1].judge_error.has_value());
    CHECK(report.n_judge_errors == 1);
    CHECK(report.rows[0].rouge_l.has_value());
    CHECK(report.columns == std::vector<std::string>{"em", "rouge_l", "bleu", "judge_score", "steps"});
}

TEST_CASE("report json round trip and fingerprint stability") {
    testing::FixedRetriever retriever({testing::sample_passage()});
    auto run = [&] {
        BenchmarkContext ctx;
        ctx.retriever = &retriever;
        ctx.backends = stepped_backends();
        return run_benchmark(three_examples(), BenchmarkConfig{}, ctx);
    };
    const auto a = run();
    const auto b = run();
    CHECK(a.config_fingerprint == b.config_fingerprint);
    CHECK(a.config_fingerprint.size() == 16);
    const auto j = to_json(a);
    CHECK(j["schema"] == std::string(kReportSchema));
    const auto back = report_from_json(j);
    CHECK(back.rows == a.rows);
    CHECK(back.aggregates == a.aggregates);
    CHECK(to_json(back) == j);
    const auto table = render_report_table(a);
    CHECK(table.find("ex-2") != std::string::npos);
    CHECK(table.find("3.0000") != std::string::npos);
}

TEST_CASE("cancellation marks the report incomplete") {
    testing::FixedRetriever retriever({testing::sample_passage()});
    std::atomic<bool> cancel{true};
    BenchmarkContext ctx;
    ctx.retriever = &retriever;
    ctx.backends = stepped_backends();
    ctx.cancel = &cancel;
    const auto report = run_benchmark(three_examples(), BenchmarkConfig{}, ctx);
    CHECK_FALSE(report.complete);
    CHECK(report.rows.empty());
    CHECK(report.has_errors());
}

TEST_CASE("metric names") {
    CHECK(parse_metric("gpt_score") == Metric::judge);
    CHECK(parse_metric_list("em, f1,rouge_l") == std::set<Metric>{Metric::em, Metric::f1, Metric::rouge_l});
    CHECK_THROWS_AS(parse_metric_list("em,,f1"), ConfigError);
    CHECK_THROWS_AS(parse_metric_list("meteor"), ConfigError);
}
