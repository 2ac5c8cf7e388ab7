#pragma once

#include "ragloop/agent/agent.hpp"
#include "ragloop/corpus/corpus.hpp"
#include "ragloop/eval/dataset.hpp"
#include "ragloop/llm/chat.hpp"
#include "ragloop/prompts/registry.hpp"
#include "ragloop/retrieval/retriever.hpp"

#include <json.hpp>

#include <atomic>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace ragloop::eval {

enum class Metric { em, f1, acc, rouge_l, bleu, judge };

/// Report column name: em, f1, acc, rouge_l, bleu, judge_score.
std::string_view to_string(Metric m);
/// Also accepts "judge_score" and "gpt_score".
Metric parse_metric(std::string_view name);
/// Comma-separated list; throws `ConfigError` on an unknown or empty entry.
std::set<Metric> parse_metric_list(std::string_view list);

struct BenchmarkConfig {
    agent::AgentConfig agent;
    std::set<Metric> metrics{Metric::em, Metric::f1, Metric::acc};
    std::size_t sample_limit{500};
    bool oracle_retrieval{false};
    /// Score em/f1/acc on an extracted short answer instead of the raw final answer.
    bool extract_short{false};
    std::size_t workers{4};
    std::size_t judge_retries{2};

    nlohmann::json to_json() const;
};

struct EvalBackends {
    agent::AgentBackends agent;
    /// Required when the judge metric is requested.
    llm::BackendPtr judge;
    /// Required when `extract_short` is set.
    llm::BackendPtr extractor;

    bool order_sensitive() const;
};

struct ExampleRow {
    std::string id;
    std::string question;
    std::vector<std::string> gold_answers;
    std::string prediction;
    std::optional<std::string> short_answer;
    std::optional<double> em;
    std::optional<double> f1;
    std::optional<double> acc;
    std::optional<double> rouge_l;
    std::optional<double> bleu;
    std::optional<double> judge_score;
    std::optional<std::string> judge_error;
    std::size_t search_count{0};
    /// searches + 1 for a completed trace.
    std::optional<double> steps;
    agent::Termination terminated_by{agent::Termination::failed};
    std::optional<std::string> error;

    std::optional<double> column(std::string_view name) const;

    friend bool operator==(const ExampleRow&, const ExampleRow&) = default;
};

struct BenchmarkContext {
    /// Search tool for normal runs.
    const retrieval::Retriever* retriever{nullptr};
    /// Passage store for oracle runs.
    corpus::CorpusHandle passages;
    EvalBackends backends;
    const prompts::PromptRegistry* registry{&prompts::PromptRegistry::builtin()};
    /// Set asynchronously to stop starting new examples.
    const std::atomic<bool>* cancel{nullptr};
    /// Called once per finished example, serialized.
    std::function<void(const ExampleRow&, const agent::AgentTrace&)> on_row;
    /// Merged into the report config under "run".
    nlohmann::json run_config;
};

struct MetricReport {
    std::vector<std::string> columns;
    /// In example-id order. A cancelled run only holds the examples that ran.
    std::vector<ExampleRow> rows;
    /// Mean of each column over the rows where it is present.
    std::map<std::string, double> aggregates;
    std::map<std::string, std::size_t> counts;
    /// Examples selected for the run.
    std::size_t n_examples{0};
    std::size_t n_failed{0};
    std::size_t n_judge_errors{0};
    bool complete{true};
    std::string config_fingerprint;
    nlohmann::json config;
    /// Parallel to `rows`; not part of the JSON report.
    std::vector<agent::AgentTrace> traces;

    bool has_errors() const noexcept { return n_failed > 0 || n_judge_errors > 0 || !complete; }
};

inline constexpr std::string_view kReportSchema = "ragloop.report/1";

/// Column means over present values; columns without values are omitted.
void compute_aggregates(MetricReport& report);

/// Runs the agent over the first `sample_limit` examples by id and scores each
/// trace. Per-example failures are recorded in their row. Throws
/// `ConfigError` before any work when the context cannot serve the config.
MetricReport run_benchmark(const std::vector<QAExample>& dataset, const BenchmarkConfig& config,
                           const BenchmarkContext& context);

nlohmann::json to_json(const ExampleRow& row);
ExampleRow row_from_json(const nlohmann::json& j);
nlohmann::json to_json(const MetricReport& report);
MetricReport report_from_json(const nlohmann::json& j);

/// Aligned columns: one line per example, then the mean line and counts.
std::string render_report_table(const MetricReport& report);

} // namespace ragloop::eval
