#include "ragloop/eval/benchmark.hpp"

#include "ragloop/agent/trace_io.hpp"
#include "ragloop/eval/judge.hpp"
#include "ragloop/eval/metrics.hpp"
#include "ragloop/text/tokenizer.hpp"
#include "ragloop/util/hash.hpp"
#include "ragloop/util/parallel.hpp"

#include <algorithm>
#include <cstdio>
#include <mutex>
#include <sstream>

namespace ragloop::eval {

using nlohmann::json;

namespace {

constexpr std::string_view kStepsColumn = "steps";

bool wants_short_form(const std::set<Metric>& m) {
    return m.count(Metric::em) || m.count(Metric::f1) || m.count(Metric::acc);
}

std::string describe(const llm::BackendPtr& b) { return b ? b->describe() : std::string("none"); }

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> read_optional(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
}

std::optional<std::string> read_optional_string(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<std::string>();
}

void score_row(ExampleRow& row, const QAExample& ex, const BenchmarkConfig& config, const BenchmarkContext& ctx) {
    const auto& metrics = config.metrics;
    std::string short_pred = row.prediction;
    if (config.extract_short && wants_short_form(metrics)) {
        row.short_answer = extract_short_answer(ex.question, row.prediction, *ctx.backends.extractor,
                                                *ctx.registry);
        short_pred = *row.short_answer;
    }
    if (metrics.count(Metric::em)) row.em = exact_match(short_pred, ex.gold_answers);
    if (metrics.count(Metric::f1)) row.f1 = token_f1(short_pred, ex.gold_answers);
    if (metrics.count(Metric::acc)) row.acc = accuracy_contains(short_pred, ex.gold_answers);

    const std::string& reference = ex.gold_answers.front();
    if (metrics.count(Metric::rouge_l)) row.rouge_l = rouge_l(row.prediction, reference);
    if (metrics.count(Metric::bleu)) row.bleu = bleu(row.prediction, reference);
    if (metrics.count(Metric::judge)) {
        try {
            row.judge_score = judge_score(ex.question, row.prediction, reference, *ctx.backends.judge,
                                          config.judge_retries, *ctx.registry);
        } catch (const JudgeError& e) {
            row.judge_error = e.what();
        } catch (const llm::BackendError& e) {
            row.judge_error = e.what();
        }
    }
}

ExampleRow run_example(const QAExample& ex, const BenchmarkConfig& config, const BenchmarkContext& ctx,
                       agent::AgentTrace& trace) {
    ExampleRow row;
    row.id = ex.id;
    row.question = ex.question;
    row.gold_answers = ex.gold_answers;
    try {
        if (config.oracle_retrieval) {
            retrieval::OracleRetriever oracle(ctx.passages, *ex.gold_passages);
            trace = agent::run_agent(ex.question, config.agent, oracle, ctx.backends.agent, *ctx.registry);
        } else {
            trace = agent::run_agent(ex.question, config.agent, *ctx.retriever, ctx.backends.agent, *ctx.registry);
        }
    } catch (const std::exception& e) {
        trace = {};
        trace.question = ex.question;
        trace.error = e.what();
    }
    row.search_count = trace.search_count;
    row.terminated_by = trace.terminated_by;
    if (!trace.ok()) {
        row.error = trace.error.value_or("agent failed");
        return row;
    }
    row.prediction = trace.final_answer;
    row.steps = static_cast<double>(trace.search_count + 1);
    try {
        score_row(row, ex, config, ctx);
    } catch (const std::exception& e) {
        row.error = std::string("scoring: ") + e.what();
    }
    return row;
}

void check_context(const std::vector<QAExample>& selected, const BenchmarkConfig& config,
                   const BenchmarkContext& ctx) {
    config.agent.validate();
    if (config.metrics.empty()) throw ConfigError("no metrics requested");
    if (!ctx.registry) throw ConfigError("no prompt registry");
    const auto& b = ctx.backends.agent;
    if (!b.planner || !b.reflector || !b.answerer) throw ConfigError("agent backends are not configured");
    if (config.metrics.count(Metric::judge) && !ctx.backends.judge)
        throw ConfigError("the judge metric needs a judge backend");
    if (config.extract_short && wants_short_form(config.metrics) && !ctx.backends.extractor)
        throw ConfigError("short-answer extraction needs an extractor backend");
    if (config.oracle_retrieval) {
        if (!ctx.passages) throw ConfigError("oracle retrieval needs a passage store");
        for (const auto& ex : selected) {
            if (!ex.gold_passages || ex.gold_passages->empty())
                throw ConfigError("oracle retrieval: example '" + ex.id + "' has no gold passages");
            for (const auto& pid : *ex.gold_passages)
                if (!ctx.passages->contains(pid))
                    throw ConfigError("oracle retrieval: example '" + ex.id + "' references unknown passage '" +
                                      pid + "'");
        }
    } else if (!ctx.retriever) {
        throw ConfigError("no retriever configured");
    }
}

std::string format_cell(const std::optional<double>& v) {
    if (!v) return "-";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", *v);
    return buf;
}

} // namespace

std::string_view to_string(Metric m) {
    switch (m) {
    case Metric::em: return "em";
    case Metric::f1: return "f1";
    case Metric::acc: return "acc";
    case Metric::rouge_l: return "rouge_l";
    case Metric::bleu: return "bleu";
    case Metric::judge: return "judge_score";
    }
    return "?";
}

Metric parse_metric(std::string_view name) {
    const std::string n = text::to_lower(text::trim(name));
    if (n == "em") return Metric::em;
    if (n == "f1") return Metric::f1;
    if (n == "acc") return Metric::acc;
    if (n == "rouge_l" || n == "rouge-l" || n == "rougel") return Metric::rouge_l;
    if (n == "bleu") return Metric::bleu;
    if (n == "judge" || n == "judge_score" || n == "gpt_score") return Metric::judge;
    throw ConfigError("unknown metric '" + std::string(name) + "'");
}

std::set<Metric> parse_metric_list(std::string_view list) {
    std::set<Metric> out;
    std::size_t start = 0;
    while (start <= list.size()) {
        auto end = list.find(',', start);
        if (end == std::string_view::npos) end = list.size();
        const auto item = text::trim(list.substr(start, end - start));
        if (item.empty()) throw ConfigError("empty entry in metric list '" + std::string(list) + "'");
        out.insert(parse_metric(item));
        start = end + 1;
    }
    return out;
}

json BenchmarkConfig::to_json() const {
    json names = json::array();
    for (auto m : metrics) names.push_back(std::string(eval::to_string(m)));
    return {{"agent", agent::to_json(agent)},
            {"metrics", names},
            {"sample_limit", sample_limit},
            {"oracle_retrieval", oracle_retrieval},
            {"extract_short", extract_short},
            {"workers", workers},
            {"judge_retries", judge_retries}};
}

bool EvalBackends::order_sensitive() const {
    return agent.order_sensitive() || (judge && judge->order_sensitive()) ||
           (extractor && extractor->order_sensitive());
}

std::optional<double> ExampleRow::column(std::string_view name) const {
    if (name == "em") return em;
    if (name == "f1") return f1;
    if (name == "acc") return acc;
    if (name == "rouge_l") return rouge_l;
    if (name == "bleu") return bleu;
    if (name == "judge_score") return judge_score;
    if (name == kStepsColumn) return steps;
    return std::nullopt;
}

void compute_aggregates(MetricReport& report) {
    report.aggregates.clear();
    report.counts.clear();
    for (const auto& col : report.columns) {
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto& row : report.rows) {
            if (auto v = row.column(col)) {
                sum += *v;
                ++n;
            }
        }
        report.counts[col] = n;
        if (n > 0) report.aggregates[col] = sum / static_cast<double>(n);
    }
}

MetricReport run_benchmark(const std::vector<QAExample>& dataset, const BenchmarkConfig& config,
                           const BenchmarkContext& context) {
    const auto selected = select_examples(dataset, config.sample_limit);
    check_context(selected, config, context);

    MetricReport report;
    for (auto m : config.metrics) report.columns.emplace_back(to_string(m));
    report.columns.emplace_back(kStepsColumn);
    report.n_examples = selected.size();

    report.config = config.to_json();
    const bool serial = context.backends.order_sensitive();
    report.config["workers"] = serial ? 1 : std::max<std::size_t>(config.workers, 1);
    report.config["backends"] = {{"planner", describe(context.backends.agent.planner)},
                                 {"reflector", describe(context.backends.agent.reflector)},
                                 {"answerer", describe(context.backends.agent.answerer)},
                                 {"judge", describe(context.backends.judge)},
                                 {"extractor", describe(context.backends.extractor)}};
    if (!context.run_config.is_null()) report.config["run"] = context.run_config;
    report.config_fingerprint = util::fingerprint(report.config.dump());

    std::vector<ExampleRow> rows(selected.size());
    std::vector<agent::AgentTrace> traces(selected.size());
    std::mutex sink_mu;
    const auto ran = util::parallel_for(
        selected.size(), report.config["workers"].get<std::size_t>(),
        [&](std::size_t i) {
            rows[i] = run_example(selected[i], config, context, traces[i]);
            if (context.on_row) {
                std::lock_guard lock(sink_mu);
                context.on_row(rows[i], traces[i]);
            }
        },
        context.cancel);

    for (std::size_t i = 0; i < selected.size(); ++i) {
        if (!ran[i]) {
            report.complete = false;
            continue;
        }
        if (rows[i].error) ++report.n_failed;
        if (rows[i].judge_error) ++report.n_judge_errors;
        report.rows.push_back(std::move(rows[i]));
        report.traces.push_back(std::move(traces[i]));
    }
    compute_aggregates(report);
    return report;
}

json to_json(const ExampleRow& row) {
    return {{"id", row.id},
            {"question", row.question},
            {"gold_answers", row.gold_answers},
            {"prediction", row.prediction},
            {"short_answer", row.short_answer ? json(*row.short_answer) : json(nullptr)},
            {"em", optional_number(row.em)},
            {"f1", optional_number(row.f1)},
            {"acc", optional_number(row.acc)},
            {"rouge_l", optional_number(row.rouge_l)},
            {"bleu", optional_number(row.bleu)},
            {"judge_score", optional_number(row.judge_score)},
            {"judge_error", row.judge_error ? json(*row.judge_error) : json(nullptr)},
            {"search_count", row.search_count},
            {"steps", optional_number(row.steps)},
            {"terminated_by", std::string(agent::to_string(row.terminated_by))},
            {"error", row.error ? json(*row.error) : json(nullptr)}};
}

ExampleRow row_from_json(const json& j) {
    ExampleRow row;
    row.id = j.at("id").get<std::string>();
    row.question = j.value("question", "");
    row.gold_answers = j.value("gold_answers", std::vector<std::string>{});
    row.prediction = j.value("prediction", "");
    row.short_answer = read_optional_string(j, "short_answer");
    row.em = read_optional(j, "em");
    row.f1 = read_optional(j, "f1");
    row.acc = read_optional(j, "acc");
    row.rouge_l = read_optional(j, "rouge_l");
    row.bleu = read_optional(j, "bleu");
    row.judge_score = read_optional(j, "judge_score");
    row.judge_error = read_optional_string(j, "judge_error");
    row.search_count = j.value("search_count", std::size_t{0});
    row.steps = read_optional(j, "steps");
    row.terminated_by = agent::parse_termination(j.at("terminated_by").get<std::string>());
    row.error = read_optional_string(j, "error");
    return row;
}

json to_json(const MetricReport& report) {
    json rows = json::array();
    for (const auto& r : report.rows) rows.push_back(to_json(r));
    return {{"schema", kReportSchema},
            {"config", report.config},
            {"config_fingerprint", report.config_fingerprint},
            {"complete", report.complete},
            {"n_examples", report.n_examples},
            {"n_failed", report.n_failed},
            {"n_judge_errors", report.n_judge_errors},
            {"columns", report.columns},
            {"aggregates", report.aggregates},
            {"counts", report.counts},
            {"rows", rows}};
}

MetricReport report_from_json(const json& j) {
    if (j.value("schema", "") != kReportSchema) throw std::invalid_argument("not a ragloop report");
    MetricReport r;
    r.config = j.value("config", json::object());
    r.config_fingerprint = j.value("config_fingerprint", "");
    r.complete = j.value("complete", true);
    r.n_examples = j.at("n_examples").get<std::size_t>();
    r.n_failed = j.value("n_failed", std::size_t{0});
    r.n_judge_errors = j.value("n_judge_errors", std::size_t{0});
    r.columns = j.at("columns").get<std::vector<std::string>>();
    r.aggregates = j.at("aggregates").get<std::map<std::string, double>>();
    r.counts = j.value("counts", std::map<std::string, std::size_t>{});
    for (const auto& row : j.at("rows")) r.rows.push_back(row_from_json(row));
    return r;
}

std::string render_report_table(const MetricReport& report) {
    std::vector<std::string> header{"id"};
    header.insert(header.end(), report.columns.begin(), report.columns.end());
    header.push_back("status");

    std::vector<std::vector<std::string>> lines{header};
    for (const auto& row : report.rows) {
        std::vector<std::string> cells{row.id};
        for (const auto& col : report.columns) cells.push_back(format_cell(row.column(col)));
        std::string status = row.error ? "error" : std::string(agent::to_string(row.terminated_by));
        if (row.judge_error) status += " (judge error)";
        cells.push_back(status);
        lines.push_back(std::move(cells));
    }
    std::vector<std::string> mean{"mean"};
    for (const auto& col : report.columns) {
        auto it = report.aggregates.find(col);
        mean.push_back(format_cell(it == report.aggregates.end() ? std::nullopt : std::optional(it->second)));
    }
    mean.emplace_back("");
    lines.push_back(mean);

    std::vector<std::size_t> width(header.size(), 0);
    for (const auto& l : lines)
        for (std::size_t c = 0; c < l.size(); ++c) width[c] = std::max(width[c], l[c].size());

    std::ostringstream out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i + 1 == lines.size()) {
            std::size_t total = 0;
            for (auto w : width) total += w + 2;
            out << std::string(total - 2, '-') << '\n';
        }
        const auto& l = lines[i];
        std::string line;
        for (std::size_t c = 0; c < l.size(); ++c) {
            std::string cell = l[c];
            if (c + 1 < l.size()) cell.resize(width[c] + 2, ' ');
            line += cell;
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out << line << '\n';
    }
    out << "examples: " << report.rows.size() << '/' << report.n_examples << "  failed: " << report.n_failed
        << "  judge errors: " << report.n_judge_errors << (report.complete ? "" : "  (incomplete)") << '\n'
        << "config: " << report.config_fingerprint << '\n';
    return out.str();
}

} // namespace ragloop::eval
