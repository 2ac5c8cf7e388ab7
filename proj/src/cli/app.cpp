#include "ragloop/cli/app.hpp"

#include "ragloop/agent/trace_io.hpp"
#include "ragloop/cli/config.hpp"
#include "ragloop/eval/benchmark.hpp"
#include "ragloop/eval/judge.hpp"
#include "ragloop/text/tokenizer.hpp"
#include "ragloop/forge/run.hpp"
#include "ragloop/retrieval/bm25_index.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>

namespace ragloop::cli {

namespace {

using nlohmann::json;

std::string fixed(double v, int digits = 2) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

struct Shared {
    std::string config;
    std::string corpus;
    std::string format;
    bool lenient{false};
    std::string index;
    std::string script;
    std::optional<std::size_t> workers;
    std::optional<std::uint64_t> seed;
};

struct AgentFlags {
    std::optional<std::size_t> max_search;
    bool no_limit{false};
    std::optional<std::size_t> top_k;
    bool reranker{false};
};

void add_corpus_flags(CLI::App* cmd, Shared& s) {
    cmd->add_option("--corpus", s.corpus, "Passage file (JSONL or TSV)");
    cmd->add_option("--format", s.format, "Corpus format: jsonl or tsv")->check(CLI::IsMember({"jsonl", "tsv"}));
    cmd->add_flag("--lenient", s.lenient, "Skip malformed corpus records instead of failing");
}

void add_backend_flags(CLI::App* cmd, Shared& s) {
    cmd->add_option("--script", s.script, "Scripted responses for the default backend");
}

void add_agent_flags(CLI::App* cmd, AgentFlags& a) {
    cmd->add_option("--max-search", a.max_search, "Search budget per question")->check(CLI::PositiveNumber);
    cmd->add_flag("--no-limit", a.no_limit, "No search budget beyond the safety cap");
    cmd->add_option("--top-k", a.top_k, "Passages retrieved per search")->check(CLI::PositiveNumber);
    cmd->add_flag("--reranker", a.reranker, "Rerank sparse hits with the configured embedder");
}

/// Config file plus flag overrides.
AppConfig effective_config(const Shared& s, const AgentFlags* a = nullptr) {
    AppConfig cfg = s.config.empty() ? AppConfig{} : load_config(s.config);
    if (!s.corpus.empty()) cfg.corpus = s.corpus;
    if (!s.format.empty()) cfg.corpus_format = corpus::parse_corpus_format(s.format);
    if (s.lenient) cfg.ingest_mode = corpus::IngestMode::lenient;
    if (!s.index.empty()) cfg.index = s.index;
    if (!s.script.empty()) {
        BackendSpec spec;
        spec.kind = BackendKind::scripted;
        spec.script = s.script;
        cfg.backend = spec;
    }
    if (s.workers) {
        if (*s.workers == 0) throw ConfigError("--workers must be at least 1");
        cfg.workers = *s.workers;
    }
    if (s.seed) cfg.seed = *s.seed;
    if (a) {
        if (a->max_search && a->no_limit) throw ConfigError("--max-search and --no-limit are exclusive");
        if (a->max_search) cfg.agent.budget_k = *a->max_search;
        if (a->no_limit) cfg.agent.budget_k.reset();
        if (a->top_k) cfg.agent.top_k = *a->top_k;
        if (a->reranker) cfg.agent.use_reranker = true;
        cfg.agent.validate();
    }
    return cfg;
}

void require_file(const std::filesystem::path& p, const char* what) {
    if (!std::filesystem::is_regular_file(p)) throw ConfigError(std::string(what) + " not found: " + p.string());
}

corpus::CorpusHandle load_corpus(const AppConfig& cfg, std::ostream& err) {
    if (!cfg.corpus) throw ConfigError("no corpus given (--corpus or [corpus] path)");
    require_file(*cfg.corpus, "corpus file");
    auto res = corpus::ingest_corpus(*cfg.corpus, cfg.corpus_format, cfg.ingest_mode);
    for (const auto& issue : res.report.issues) err << "corpus line " << issue.line << ": " << issue.message << '\n';
    return res.corpus;
}

std::unique_ptr<retrieval::Bm25Index> obtain_index(const AppConfig& cfg, std::ostream& err) {
    if (cfg.index) {
        require_file(*cfg.index, "index file");
        return std::make_unique<retrieval::Bm25Index>(retrieval::Bm25Index::load(*cfg.index));
    }
    return std::make_unique<retrieval::Bm25Index>(retrieval::Bm25Index::build(load_corpus(cfg, err)));
}

struct Registry {
    std::optional<prompts::PromptRegistry> loaded;
    const prompts::PromptRegistry& get() const { return loaded ? *loaded : prompts::PromptRegistry::builtin(); }
};

Registry load_registry(const AppConfig& cfg) {
    Registry r;
    if (cfg.prompts_dir) r.loaded = prompts::PromptRegistry::load(*cfg.prompts_dir);
    return r;
}

std::unique_ptr<retrieval::Embedder> make_embedder(const AppConfig& cfg) {
    if (!cfg.agent.use_reranker) return nullptr;
    if (!cfg.embedder) throw ConfigError("the reranker needs an [embedder] section");
    retrieval::HttpEmbedderConfig ec;
    ec.url = cfg.embedder->url;
    ec.model = cfg.embedder->model;
    ec.api_key = cfg.embedder->api_key;
    return std::make_unique<retrieval::HttpEmbedder>(std::move(ec));
}

retrieval::Bm25RetrieverOptions retrieval_options(const AppConfig& cfg) {
    auto opts = agent::retriever_options(cfg.agent);
    if (cfg.embedder) {
        opts.rerank.batch_size = cfg.embedder->batch_size;
        opts.rerank.query_prefix = cfg.embedder->query_prefix;
        opts.rerank.passage_prefix = cfg.embedder->passage_prefix;
    }
    return opts;
}

agent::AgentConfig agent_config(const AppConfig& cfg) {
    auto a = cfg.agent;
    a.planner_params = role_params(cfg, "planner", a.planner_params);
    a.reflector_params = role_params(cfg, "reflector", a.reflector_params);
    a.answer_params = role_params(cfg, "answerer", a.answer_params);
    return a;
}

llm::LogSink log_to(std::ostream& err) {
    return [&err](std::string_view line) { err << line << '\n'; };
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << content;
    if (!out) throw IoError("write failed for " + path.string());
}

std::vector<std::string> read_id_list(const std::filesystem::path& path) {
    require_file(path, "article list");
    std::ifstream in(path);
    std::vector<std::string> ids;
    std::string line;
    while (std::getline(in, line)) {
        auto v = text::trim(line);
        if (!v.empty() && v.front() != '#') ids.emplace_back(v);
    }
    return ids;
}

// ---- commands -------------------------------------------------------------

int cmd_index(const Shared& s, const std::string& out_path, std::ostream& out, std::ostream& err) {
    auto cfg = effective_config(s);
    const std::filesystem::path dest = !out_path.empty() ? std::filesystem::path(out_path)
                                       : cfg.index        ? *cfg.index
                                                          : throw ConfigError("no output path (--out or [index] path)");
    auto index = retrieval::Bm25Index::build(load_corpus(cfg, err));
    if (dest.has_parent_path()) std::filesystem::create_directories(dest.parent_path());
    index.save(dest);
    out << index.stats().doc_count << " documents, " << index.all_postings().size() << " terms, average length "
        << fixed(index.stats().avg_doc_len) << " tokens\n"
        << "index written to " << dest.string() << '\n';
    return kExitOk;
}

int cmd_corpus_stats(const Shared& s, std::ostream& out, std::ostream& err) {
    auto cfg = effective_config(s);
    if (!cfg.corpus) throw ConfigError("no corpus given (--corpus or [corpus] path)");
    require_file(*cfg.corpus, "corpus file");
    auto res = corpus::ingest_corpus(*cfg.corpus, cfg.corpus_format, cfg.ingest_mode);
    for (const auto& issue : res.report.issues) err << "corpus line " << issue.line << ": " << issue.message << '\n';
    const auto& st = res.corpus->stats();
    std::size_t linked = 0;
    for (const auto& p : res.corpus->passages()) linked += p.links.empty() ? 0 : 1;
    out << "documents:        " << st.doc_count << '\n'
        << "tokens:           " << st.total_tokens << '\n'
        << "average length:   " << fixed(st.avg_doc_len) << '\n'
        << "with links:       " << linked << '\n'
        << "records read:     " << res.report.records << '\n'
        << "records skipped:  " << res.report.skipped << '\n'
        << "duplicates:       " << res.report.duplicates_replaced << '\n';
    return kExitOk;
}

int cmd_ask(const Shared& s, const AgentFlags& a, const std::string& question, bool as_json, std::ostream& out,
            std::ostream& err) {
    auto cfg = effective_config(s, &a);
    auto registry = load_registry(cfg);
    auto index = obtain_index(cfg, err);
    auto embedder = make_embedder(cfg);
    retrieval::Bm25Retriever retriever(*index, retrieval_options(cfg), embedder.get());
    BackendPool pool(cfg, log_to(err));
    agent::AgentBackends backends{pool.get("planner"), pool.get("reflector"), pool.get("answerer")};

    const auto trace = agent::run_agent(question, agent_config(cfg), retriever, backends, registry.get());
    if (as_json) {
        out << agent::to_json(trace).dump(2) << '\n';
    } else {
        out << agent::render_transcript(trace);
    }
    if (!trace.ok()) {
        err << "error: " << trace.error.value_or("agent failed") << '\n';
        return kExitFailure;
    }
    return kExitOk;
}

struct EvalFlags {
    std::string dataset;
    std::size_t limit{500};
    std::string metrics{"em,f1,acc"};
    bool oracle{false};
    std::string passages;
    bool extract_short{false};
    std::string out{"report.json"};
    std::string table;
    std::string traces;
};

int cmd_eval(const Shared& s, const AgentFlags& a, const EvalFlags& f, std::ostream& out, std::ostream& err,
             const std::atomic<bool>* cancel) {
    auto cfg = effective_config(s, &a);
    eval::BenchmarkConfig bc;
    bc.agent = agent_config(cfg);
    bc.metrics = eval::parse_metric_list(f.metrics);
    bc.sample_limit = f.limit;
    bc.oracle_retrieval = f.oracle;
    bc.extract_short = f.extract_short;
    bc.workers = cfg.workers;
    bc.judge_retries = cfg.judge_retries;

    require_file(f.dataset, "dataset");
    const auto dataset = eval::load_dataset(f.dataset);
    auto registry = load_registry(cfg);

    eval::BenchmarkContext ctx;
    ctx.registry = &registry.get();
    ctx.cancel = cancel;

    std::unique_ptr<retrieval::Bm25Index> index;
    std::unique_ptr<retrieval::Embedder> embedder;
    std::unique_ptr<retrieval::Bm25Retriever> retriever;
    if (f.oracle) {
        AppConfig store = cfg;
        if (!f.passages.empty()) store.corpus = f.passages;
        if (!store.corpus) throw ConfigError("oracle retrieval needs a passage file (--passages or --corpus)");
        ctx.passages = load_corpus(store, err);
    } else {
        index = obtain_index(cfg, err);
        embedder = make_embedder(cfg);
        retriever = std::make_unique<retrieval::Bm25Retriever>(*index, retrieval_options(cfg), embedder.get());
        ctx.retriever = retriever.get();
    }

    BackendPool pool(cfg, log_to(err));
    ctx.backends.agent = {pool.get("planner"), pool.get("reflector"), pool.get("answerer")};
    if (bc.metrics.count(eval::Metric::judge)) ctx.backends.judge = pool.get("judge");
    if (bc.extract_short) ctx.backends.extractor = pool.get("extractor");

    std::ofstream traces_out;
    if (!f.traces.empty()) {
        traces_out.open(f.traces, std::ios::binary);
        if (!traces_out) throw IoError("cannot write " + f.traces);
        ctx.on_row = [&](const eval::ExampleRow& row, const agent::AgentTrace& trace) {
            auto j = agent::to_json(trace);
            j["id"] = row.id;
            traces_out << j.dump() << '\n';
        };
    }
    ctx.run_config = cfg.to_json();
    ctx.run_config["dataset"] = f.dataset;
    if (f.oracle) ctx.run_config["passages"] = f.passages.empty() ? ctx.run_config["corpus"] : json(f.passages);

    auto report = eval::run_benchmark(dataset, bc, ctx);
    const auto table = eval::render_report_table(report);
    write_file(f.out, eval::to_json(report).dump(2) + "\n");
    std::filesystem::path table_path = f.table;
    if (table_path.empty()) table_path = std::filesystem::path(f.out).replace_extension(".txt");
    write_file(table_path, table);
    out << table << "report: " << f.out << '\n';
    if (report.has_errors()) {
        err << "error: " << report.n_failed << " example(s) failed, " << report.n_judge_errors
            << " judge error(s)" << (report.complete ? "" : ", run interrupted") << '\n';
        return kExitFailure;
    }
    return kExitOk;
}

struct ForgeFlags {
    std::string out;
    std::string in;
    std::optional<std::size_t> count;
    std::optional<double> multi_hop_ratio;
    std::optional<std::size_t> min_chars;
    std::optional<std::size_t> max_steps;
    std::optional<double> test_fraction;
    std::string train_articles;
    std::string test_articles;
};

forge::ForgeBackends forge_backends(BackendPool& pool) {
    return {pool.get("selector"), pool.get("generator"), pool.get("annotator"), pool.get("judge")};
}

int cmd_forge_generate(const Shared& s, const ForgeFlags& f, std::ostream& out, std::ostream& err,
                       const std::atomic<bool>* cancel) {
    auto cfg = effective_config(s);
    forge::ForgeConfig fc;
    fc.target_count = f.count.value_or(cfg.forge.count);
    fc.seed = cfg.seed;
    fc.multi_hop_ratio = f.multi_hop_ratio.value_or(cfg.forge.multi_hop_ratio);
    fc.min_main_chars = f.min_chars.value_or(cfg.forge.min_main_chars);
    fc.annotate.max_steps = f.max_steps.value_or(cfg.forge.max_steps);
    fc.annotate.planner_params = role_params(cfg, "annotator", {});
    fc.annotate.evidence_params = fc.annotate.planner_params;
    fc.generation = role_params(cfg, "generator", forge::default_generation_params());
    fc.test_fraction = f.test_fraction.value_or(cfg.forge.test_fraction);
    fc.judge_retries = cfg.judge_retries;
    fc.workers = cfg.workers;
    if (!f.train_articles.empty()) fc.train_articles = read_id_list(f.train_articles);
    if (!f.test_articles.empty()) fc.test_articles = read_id_list(f.test_articles);
    fc.validate();

    auto corpus = load_corpus(cfg, err);
    auto registry = load_registry(cfg);
    BackendPool pool(cfg, log_to(err));
    forge::ForgeContext ctx;
    ctx.registry = &registry.get();
    ctx.cancel = cancel;
    ctx.run_config = cfg.to_json();

    forge::ForgeResult result;
    try {
        result = forge::run_forge(*corpus, forge_backends(pool), fc, ctx);
    } catch (const forge::ForgeAborted& e) {
        err << "error: forge run aborted: " << e.what() << '\n';
        return kExitFailure;
    }
    forge::write_forge_outputs(f.out, result);
    const auto& r = result.report;
    out << "attempted " << r.attempted << ", kept " << r.kept << " (train " << r.kept_train << ", test "
        << r.kept_test << "), dropped " << r.dropped << ", failed " << r.failed << '\n'
        << "training records: " << r.records << '\n'
        << "outputs written to " << f.out << '\n';
    if (!r.complete) {
        err << "error: run interrupted; outputs are partial\n";
        return kExitFailure;
    }
    return kExitOk;
}

int cmd_forge_verify(const Shared& s, const ForgeFlags& f, std::ostream& out, std::ostream& err) {
    auto cfg = effective_config(s);
    require_file(f.in, "annotation file");
    auto annotations = forge::load_annotations(f.in);
    auto registry = load_registry(cfg);
    BackendPool pool(cfg, log_to(err));
    auto judge = pool.get("judge");

    std::size_t kept = 0, dropped = 0, errors = 0, skipped = 0;
    for (std::size_t i = 0; i < annotations.size(); ++i) {
        auto& a = annotations[i];
        if (!a.ok()) {
            ++skipped;
            continue;
        }
        try {
            const auto v = forge::verify_annotation(a.question.question, a.final_answer,
                                                    a.question.reference_answer, *judge, cfg.judge_retries,
                                                    registry.get());
            a.verification_score = v.score;
            ++(v.keep ? kept : dropped);
        } catch (const eval::JudgeError& e) {
            a.verification_score.reset();
            ++errors;
            err << "annotation " << i << ": " << e.what() << '\n';
        }
    }
    forge::save_annotations(f.out, annotations);
    out << "kept " << kept << ", dropped " << dropped << ", judge errors " << errors << ", skipped (failed) "
        << skipped << '\n';
    return errors ? kExitFailure : kExitOk;
}

int cmd_forge_export(const Shared& s, const ForgeFlags& f, std::ostream& out, std::ostream& err) {
    auto cfg = effective_config(s);
    require_file(f.in, "annotation file");
    const auto annotations = forge::load_annotations(f.in);
    auto registry = load_registry(cfg);
    std::vector<forge::TrainingRecord> records;
    std::size_t skipped = 0;
    for (std::size_t i = 0; i < annotations.size(); ++i) {
        try {
            for (auto& r : forge::emit_training_records(annotations[i], registry.get()))
                records.push_back(std::move(r));
        } catch (const std::invalid_argument& e) {
            ++skipped;
            err << "annotation " << i << " skipped: " << e.what() << '\n';
        }
    }
    forge::save_records(f.out, records);
    out << records.size() << " records from " << annotations.size() - skipped << " annotation(s), " << skipped
        << " skipped\n";
    return kExitOk;
}

int cmd_forge_stats(const ForgeFlags& f, std::ostream& out) {
    require_file(f.in, "annotation file");
    const auto annotations = forge::load_annotations(f.in);
    std::vector<std::string> questions;
    std::size_t searches = 0, supporting = 0;
    for (const auto& a : annotations) {
        questions.push_back(a.question.question);
        searches += a.search_count();
        supporting += a.question.pair.supporting.size();
    }
    const auto stats = forge::question_type_stats(questions);
    out << "type    count  share\n";
    for (const auto& [type, n] : stats) {
        std::string label = type;
        label.resize(8, ' ');
        std::string count = std::to_string(n);
        count.resize(7, ' ');
        out << label << count << fixed(100.0 * static_cast<double>(n) / static_cast<double>(questions.size()), 1)
            << "%\n";
    }
    out << "total   " << questions.size() << '\n';
    if (!annotations.empty()) {
        const auto n = static_cast<double>(annotations.size());
        out << "mean searches: " << fixed(static_cast<double>(searches) / n)
            << "  mean supporting passages: " << fixed(static_cast<double>(supporting) / n) << '\n';
    }
    return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const std::atomic<bool>* cancel) {
    CLI::App app{"Retrieval-augmented question answering agent, evaluation and training-data tools", "ragloop"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "ragloop 0.1.0");

    Shared s;
    AgentFlags a;
    auto add_config = [&](CLI::App* cmd) { cmd->add_option("--config", s.config, "INI config file"); };

    auto* index = app.add_subcommand("index", "Build and save a BM25 index");
    std::string index_out;
    add_config(index);
    add_corpus_flags(index, s);
    index->add_option("--out,-o", index_out, "Index file to write");

    auto* corpus_cmd = app.add_subcommand("corpus", "Corpus utilities");
    corpus_cmd->require_subcommand(1);
    auto* corpus_stats = corpus_cmd->add_subcommand("stats", "Print corpus statistics");
    add_config(corpus_stats);
    add_corpus_flags(corpus_stats, s);

    auto* ask = app.add_subcommand("ask", "Answer one question and print the trace");
    std::string question;
    bool as_json = false;
    ask->add_option("question", question, "Question text")->required();
    add_config(ask);
    add_corpus_flags(ask, s);
    ask->add_option("--index", s.index, "Saved index file");
    add_backend_flags(ask, s);
    add_agent_flags(ask, a);
    ask->add_flag("--json", as_json, "Print the trace as JSON");

    auto* ev = app.add_subcommand("eval", "Run a benchmark over a dataset file");
    EvalFlags ef;
    ev->add_option("dataset", ef.dataset, "Dataset JSONL")->required();
    add_config(ev);
    add_corpus_flags(ev, s);
    ev->add_option("--index", s.index, "Saved index file");
    add_backend_flags(ev, s);
    add_agent_flags(ev, a);
    ev->add_option("--limit", ef.limit, "Examples to run (first by id)")->check(CLI::PositiveNumber);
    ev->add_option("--metrics", ef.metrics, "Comma-separated: em,f1,acc,rouge_l,bleu,judge");
    ev->add_flag("--oracle-retrieval", ef.oracle, "Serve each example's gold passages instead of searching");
    ev->add_option("--passages", ef.passages, "Passage file for oracle retrieval");
    ev->add_flag("--extract-short", ef.extract_short, "Score em/f1/acc on an extracted short answer");
    ev->add_option("--out,-o", ef.out, "Report JSON path");
    ev->add_option("--table", ef.table, "Text table path (default: report path with .txt)");
    ev->add_option("--traces", ef.traces, "Write one trace per example as JSONL");
    ev->add_option("--workers", s.workers, "Concurrent examples");

    auto* fg = app.add_subcommand("forge", "Synthetic training-data pipeline");
    fg->require_subcommand(1);
    ForgeFlags ff;
    auto* gen = fg->add_subcommand("generate", "Sample, generate, annotate and verify");
    add_config(gen);
    add_corpus_flags(gen, s);
    add_backend_flags(gen, s);
    gen->add_option("--out,-o", ff.out, "Output directory")->required();
    gen->add_option("--count", ff.count, "Articles to attempt")->check(CLI::PositiveNumber);
    gen->add_option("--seed", s.seed, "Sampling seed");
    gen->add_option("--multi-hop-ratio", ff.multi_hop_ratio, "Share of multi-hop items")->check(CLI::Range(0.0, 1.0));
    gen->add_option("--min-chars", ff.min_chars, "Minimum main-passage length");
    gen->add_option("--max-steps", ff.max_steps, "Planner steps per annotation")->check(CLI::PositiveNumber);
    gen->add_option("--test-fraction", ff.test_fraction, "Share of articles held out for testing");
    gen->add_option("--train-articles", ff.train_articles, "File with training article ids, one per line");
    gen->add_option("--test-articles", ff.test_articles, "File with test article ids, one per line");
    gen->add_option("--workers", s.workers, "Concurrent items");

    auto* ver = fg->add_subcommand("verify", "Re-score annotations with the judge");
    add_config(ver);
    add_backend_flags(ver, s);
    ver->add_option("--in,-i", ff.in, "Annotation JSONL")->required();
    ver->add_option("--out,-o", ff.out, "Re-scored annotation JSONL")->required();

    auto* exp = fg->add_subcommand("export", "Emit training records for kept annotations");
    add_config(exp);
    exp->add_option("--in,-i", ff.in, "Annotation JSONL")->required();
    exp->add_option("--out,-o", ff.out, "Training record JSONL")->required();

    auto* st = fg->add_subcommand("stats", "Question-type distribution of an annotation file");
    st->add_option("--in,-i", ff.in, "Annotation JSONL")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*index) return cmd_index(s, index_out, out, err);
        if (*corpus_stats) return cmd_corpus_stats(s, out, err);
        if (*ask) return cmd_ask(s, a, question, as_json, out, err);
        if (*ev) return cmd_eval(s, a, ef, out, err, cancel);
        if (*gen) return cmd_forge_generate(s, ff, out, err, cancel);
        if (*ver) return cmd_forge_verify(s, ff, out, err);
        if (*exp) return cmd_forge_export(s, ff, out, err);
        if (*st) return cmd_forge_stats(ff, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

} // namespace ragloop::cli
