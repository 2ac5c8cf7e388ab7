#include "ragloop/agent/trace_io.hpp"

#include <stdexcept>

namespace ragloop::agent {

using nlohmann::json;

json to_json(const llm::GenerationParams& params) {
    return {{"temperature", params.temperature}, {"max_tokens", params.max_tokens}, {"stop", params.stop}};
}

json to_json(const AgentConfig& config) {
    return {{"budget_k", config.budget_k ? json(*config.budget_k) : json(nullptr)},
            {"safety_cap", config.safety_cap},
            {"top_k", config.top_k},
            {"use_reranker", config.use_reranker},
            {"max_planner_parse_retries", config.max_planner_parse_retries},
            {"evidence_char_limit", config.evidence_char_limit ? json(*config.evidence_char_limit) : json(nullptr)},
            {"planner", to_json(config.planner_params)},
            {"reflector", to_json(config.reflector_params)},
            {"answer", to_json(config.answer_params)}};
}

json to_json(const AgentStep& step) {
    json j{{"thought", step.thought}};
    if (step.is_search()) {
        j["action"] = {{"type", "search"}, {"query", step.query()}};
    } else {
        j["action"] = {{"type", "final_answer"}, {"answer", std::get<FinalAnswerAction>(step.action).answer}};
    }
    j["evidence"] = step.evidence ? json(*step.evidence) : json(nullptr);
    j["retrieved"] = step.retrieved;
    j["repeated_query"] = step.repeated_query;
    return j;
}

AgentStep step_from_json(const json& j) {
    AgentStep step;
    step.thought = j.at("thought").get<std::string>();
    const auto& action = j.at("action");
    const auto type = action.at("type").get<std::string>();
    if (type == "search") {
        step.action = SearchAction{action.at("query").get<std::string>()};
    } else if (type == "final_answer") {
        step.action = FinalAnswerAction{action.value("answer", "")};
    } else {
        throw std::invalid_argument("unknown action type '" + type + "'");
    }
    if (j.contains("evidence") && !j.at("evidence").is_null()) step.evidence = j.at("evidence").get<std::string>();
    if (step.evidence && !step.is_search()) throw std::invalid_argument("evidence on a non-search step");
    step.retrieved = j.value("retrieved", std::vector<std::string>{});
    step.repeated_query = j.value("repeated_query", false);
    return step;
}

json to_json(const AgentTrace& trace) {
    json steps = json::array();
    for (const auto& s : trace.steps) steps.push_back(to_json(s));
    json j{{"schema", kTraceSchema},
           {"question", trace.question},
           {"steps", std::move(steps)},
           {"final_answer", trace.final_answer},
           {"terminated_by", to_string(trace.terminated_by)},
           {"search_count", trace.search_count},
           {"step_count", trace.step_count}};
    j["error"] = trace.error ? json(*trace.error) : json(nullptr);
    return j;
}

AgentTrace trace_from_json(const json& j) {
    try {
        if (j.at("schema").get<std::string>() != kTraceSchema)
            throw std::invalid_argument("unsupported trace schema " + j.at("schema").dump());
        AgentTrace t;
        t.question = j.at("question").get<std::string>();
        for (const auto& s : j.at("steps")) t.steps.push_back(step_from_json(s));
        t.final_answer = j.at("final_answer").get<std::string>();
        t.terminated_by = parse_termination(j.at("terminated_by").get<std::string>());
        t.search_count = j.at("search_count").get<std::size_t>();
        t.step_count = j.at("step_count").get<std::size_t>();
        if (j.contains("error") && !j.at("error").is_null()) t.error = j.at("error").get<std::string>();
        return t;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed trace: ") + e.what());
    }
}

std::string render_transcript(const AgentTrace& trace) {
    std::string out = "Question: " + trace.question + "\n";
    for (const auto& step : trace.steps) {
        out += "### Thought: " + step.thought + "\n";
        if (step.is_search()) {
            out += "### Action - Search Input: " + step.query() + "\n";
            if (step.evidence) {
                out += "### Evidence: ";
                if (step.repeated_query) out += "(repeated query) ";
                out += *step.evidence + "\n";
            }
        }
    }
    if (trace.ok()) {
        out += "### Action - Final Answer: " + trace.final_answer + "\n";
    } else {
        out += "### Failed: " + trace.error.value_or("unknown error") + "\n";
    }
    out += "[terminated_by=" + std::string(to_string(trace.terminated_by)) +
           " searches=" + std::to_string(trace.search_count) + " steps=" + std::to_string(trace.step_count) + "]\n";
    return out;
}

} // namespace ragloop::agent
