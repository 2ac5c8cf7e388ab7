#include "ragloop/agent/agent.hpp"

#include "ragloop/text/tokenizer.hpp"

#include <algorithm>
#include <map>

namespace ragloop::agent {

namespace {

constexpr std::string_view kBudgetThought = "The search budget is exhausted; answering with the evidence gathered so far.";

std::string normalize_query(std::string_view q) { return text::collapse_whitespace(text::to_lower(q)); }

std::string truncate_utf8(std::string s, std::size_t limit) {
    if (s.size() <= limit) return s;
    std::size_t cut = limit;
    while (cut > 0 && (static_cast<unsigned char>(s[cut]) & 0xC0) == 0x80) --cut;
    s.resize(cut);
    return s;
}

bool is_no_information(std::string_view s) {
    s = text::trim(s);
    if (!s.empty() && s.back() == '.') s.remove_suffix(1);
    return text::iequals(s, "No information found");
}

} // namespace

std::size_t AgentConfig::search_cap() const {
    return budget_k ? std::min(*budget_k, safety_cap) : safety_cap;
}

void AgentConfig::validate() const {
    if (budget_k && *budget_k == 0) throw ConfigError("budget_k must be at least 1");
    if (safety_cap == 0) throw ConfigError("safety cap must be at least 1");
    if (top_k == 0) throw ConfigError("top_k must be at least 1");
}

bool AgentBackends::order_sensitive() const {
    return planner->order_sensitive() || reflector->order_sensitive() || answerer->order_sensitive();
}

std::string_view to_string(Termination t) {
    switch (t) {
    case Termination::planner_done: return "planner_done";
    case Termination::budget_exhausted: return "budget_exhausted";
    case Termination::failed: return "failed";
    }
    return "failed";
}

Termination parse_termination(std::string_view name) {
    if (name == "planner_done") return Termination::planner_done;
    if (name == "budget_exhausted") return Termination::budget_exhausted;
    if (name == "failed") return Termination::failed;
    throw std::invalid_argument("unknown termination '" + std::string(name) + "'");
}

std::string format_sources(const std::vector<corpus::Passage>& passages) {
    std::string out;
    for (std::size_t i = 0; i < passages.size(); ++i) {
        if (i) out += "\n\n";
        out += "[" + std::to_string(i + 1) + "] ";
        if (!passages[i].title.empty()) out += passages[i].title + "\n";
        out += passages[i].text;
    }
    return out;
}

std::string format_evidence_list(const std::vector<std::string>& evidence) {
    if (evidence.empty()) return "No evidence was gathered.";
    std::string out;
    for (std::size_t i = 0; i < evidence.size(); ++i) {
        if (i) out += "\n";
        out += "[" + std::to_string(i + 1) + "] " + evidence[i];
    }
    return out;
}

AgentStep plan_next(const WorkingMemory& memory, llm::ChatBackend& planner, const AgentConfig& config,
                    const prompts::PromptRegistry& registry) {
    auto messages = serialize_memory(memory, registry.render(prompts::TemplateId::train_solve, {}));
    for (std::size_t attempt = 0;; ++attempt) {
        const auto reply = planner.chat(messages, config.planner_params);
        try {
            return parse_step(reply);
        } catch (const StepParseError& e) {
            if (attempt >= config.max_planner_parse_retries)
                throw PlannerProtocolError("planner output unparseable after " + std::to_string(attempt + 1) +
                                           " attempt(s): " + e.what());
            messages.push_back(llm::assistant_message(text::trim(reply).empty() ? "(empty reply)" : reply));
            messages.push_back(llm::user_message(std::string(kFormatCorrection)));
        }
    }
}

std::string reflect_evidence(std::string_view query, const std::vector<corpus::Passage>& docs,
                             llm::ChatBackend& reflector, const prompts::PromptRegistry& registry,
                             const llm::GenerationParams& params) {
    if (docs.empty()) return std::string(kNoInformation);
    const auto prompt = registry.render(prompts::TemplateId::train_extract_evidence,
                                        {{"query", std::string(query)}, {"sources", format_sources(docs)}});
    const auto raw = reflector.chat({llm::user_message(prompt)}, params);
    auto reply = text::trim(raw);
    if (reply.size() >= 12 && text::iequals(reply.substr(0, 12), "### Evidence")) {
        reply.remove_prefix(12);
        if (!reply.empty() && reply.front() == ':') reply.remove_prefix(1);
        reply = text::trim(reply);
    }
    if (reply.empty() || is_no_information(reply)) return std::string(kNoInformation);
    return std::string(reply);
}

std::string final_answer(const WorkingMemory& memory, llm::ChatBackend& answerer,
                         const prompts::PromptRegistry& registry, const llm::GenerationParams& params) {
    const auto prompt =
        registry.render(prompts::TemplateId::train_final_answer,
                        {{"question", memory.question}, {"evidence", format_evidence_list(memory.evidence())}});
    const auto raw = answerer.chat({llm::user_message(prompt)}, params);
    auto answer = std::string(text::trim(raw));
    if (answer.empty()) throw AgentError("final-answer call returned an empty answer");
    return answer;
}

AgentTrace run_agent(const std::string& question, const AgentConfig& config, const retrieval::Retriever& retriever,
                     const AgentBackends& backends, const prompts::PromptRegistry& registry) {
    config.validate();
    AgentTrace trace;
    trace.question = question;

    WorkingMemory memory{question, {}};
    struct Cached {
        std::string evidence;
        std::vector<std::string> retrieved;
    };
    std::map<std::string, Cached> cache;
    const std::size_t cap = config.search_cap();

    auto finish = [&] {
        trace.steps = memory.steps;
        trace.step_count = trace.steps.size();
    };

    try {
        for (;;) {
            if (trace.search_count >= cap) {
                trace.terminated_by = Termination::budget_exhausted;
                AgentStep stop;
                stop.thought = std::string(kBudgetThought);
                stop.action = FinalAnswerAction{};
                memory.steps.push_back(std::move(stop));
                break;
            }
            AgentStep step = plan_next(memory, *backends.planner, config, registry);
            if (step.is_final()) {
                trace.terminated_by = Termination::planner_done;
                memory.steps.push_back(std::move(step));
                break;
            }

            const auto key = normalize_query(step.query());
            if (auto hit = cache.find(key); hit != cache.end()) {
                step.evidence = hit->second.evidence;
                step.retrieved = hit->second.retrieved;
                step.repeated_query = true;
            } else {
                auto docs = retriever.retrieve(step.query());
                auto evidence = reflect_evidence(step.query(), docs.passages, *backends.reflector, registry,
                                                 config.reflector_params);
                if (config.evidence_char_limit) evidence = truncate_utf8(std::move(evidence), *config.evidence_char_limit);
                for (const auto& h : docs.result.hits) step.retrieved.push_back(h.passage_id);
                step.evidence = evidence;
                cache.emplace(key, Cached{std::move(evidence), step.retrieved});
            }
            memory.steps.push_back(std::move(step));
            ++trace.search_count;
        }
        // The terminal step stays in the trace but carries no evidence.
        trace.final_answer = final_answer(memory, *backends.answerer, registry, config.answer_params);
    } catch (const std::exception& e) {
        trace.terminated_by = Termination::failed;
        trace.error = e.what();
        trace.final_answer.clear();
    }
    finish();
    return trace;
}

retrieval::Bm25RetrieverOptions retriever_options(const AgentConfig& config) {
    retrieval::Bm25RetrieverOptions opts;
    opts.top_k = config.top_k;
    opts.use_reranker = config.use_reranker;
    return opts;
}

} // namespace ragloop::agent
