#include "ragloop/forge/pipeline.hpp"

#include "ragloop/agent/agent.hpp"
#include "ragloop/eval/judge.hpp"
#include "ragloop/text/tokenizer.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ragloop::forge {

namespace {

constexpr std::string_view kSelectionCorrection =
    "Reply with the ids of the selected passages, one per line, or NONE.";
constexpr std::string_view kQuestionCorrection =
    "Your reply did not follow the required format. Use exactly:\n### Question: <the question>\n### Answer: "
    "<the long-form reference answer>";

std::string format_candidates(const std::vector<corpus::Passage>& linked) {
    std::string out;
    for (std::size_t i = 0; i < linked.size(); ++i) {
        if (i) out += "\n\n";
        out += "[" + linked[i].id + "] ";
        if (!linked[i].title.empty()) out += linked[i].title + "\n";
        out += linked[i].text;
    }
    return out;
}

// Strips list markers and brackets: "1. [p3]" -> "p3".
std::string clean_name(std::string_view line) {
    auto v = text::trim(line);
    while (!v.empty() && (v.front() == '-' || v.front() == '*')) v = text::trim(v.substr(1));
    std::size_t digits = 0;
    while (digits < v.size() && std::isdigit(static_cast<unsigned char>(v[digits]))) ++digits;
    if (digits > 0 && digits < v.size() && (v[digits] == '.' || v[digits] == ')')) v = text::trim(v.substr(digits + 1));
    if (v.size() >= 2 && v.front() == '[' && v.back() == ']') v = text::trim(v.substr(1, v.size() - 2));
    return std::string(v);
}

bool is_none(std::string_view s) {
    s = text::trim(s);
    if (!s.empty() && s.back() == '.') s.remove_suffix(1);
    return text::iequals(s, "none");
}

std::optional<std::size_t> match_candidate(const std::string& name, const std::vector<corpus::Passage>& linked) {
    for (std::size_t i = 0; i < linked.size(); ++i)
        if (linked[i].id == name) return i;
    for (std::size_t i = 0; i < linked.size(); ++i)
        if (!linked[i].title.empty() && text::iequals(linked[i].title, name)) return i;
    return std::nullopt;
}

// Value of a "### Label:" header that may span several lines, up to the next header.
std::optional<std::string> header_section(std::string_view textv, std::string_view label) {
    std::istringstream in{std::string(textv)};
    std::string line;
    std::optional<std::string> value;
    bool inside = false;
    while (std::getline(in, line)) {
        auto v = text::trim(line);
        std::string_view body = v;
        bool header = false;
        if (!body.empty() && body.front() == '#') {
            while (!body.empty() && body.front() == '#') body.remove_prefix(1);
            body = text::trim(body);
            header = true;
        }
        const auto colon = body.find(':');
        if (colon != std::string_view::npos) {
            const auto name = text::trim(body.substr(0, colon));
            if (text::iequals(name, "question") || text::iequals(name, "answer")) header = true;
            if (header && text::iequals(name, label)) {
                value = std::string(text::trim(body.substr(colon + 1)));
                inside = true;
                continue;
            }
        }
        if (header && colon != std::string_view::npos) {
            inside = false;
            continue;
        }
        if (inside) {
            if (!value->empty()) *value += "\n";
            *value += std::string(v);
        }
    }
    if (value) *value = std::string(text::trim(*value));
    return value;
}

} // namespace

SupportSelection select_supporting(const corpus::Passage& main, const std::vector<corpus::Passage>& linked,
                                   llm::ChatBackend& backend, std::size_t max_retries,
                                   const prompts::PromptRegistry& registry, const llm::GenerationParams& params) {
    SupportSelection out;
    out.pair.main = main;
    if (linked.empty()) return out;

    std::vector<llm::ChatMessage> messages{llm::user_message(
        registry.render(prompts::TemplateId::related_passages, {{"main_title", main.title},
                                                                {"main_passage", main.text},
                                                                {"candidates", format_candidates(linked)}}))};
    std::vector<std::string> names;
    for (std::size_t attempt = 0;; ++attempt) {
        const auto reply = backend.chat(messages, params);
        names.clear();
        bool none = false;
        std::istringstream in(reply);
        std::string line;
        while (std::getline(in, line)) {
            if (text::trim(line).empty()) continue;
            if (is_none(line)) {
                none = true;
                continue;
            }
            // Comma-separated replies are accepted too.
            std::istringstream parts(line);
            std::string part;
            while (std::getline(parts, part, ',')) {
                auto name = clean_name(part);
                if (!name.empty()) names.push_back(std::move(name));
            }
        }
        if (none || !names.empty()) break;
        if (attempt >= max_retries) throw ForgeParseError("supporting-passage selection: empty reply");
        messages.push_back(llm::assistant_message("(empty reply)"));
        messages.push_back(llm::user_message(std::string(kSelectionCorrection)));
    }

    std::set<std::size_t> taken;
    for (const auto& name : names) {
        const auto idx = match_candidate(name, linked);
        if (!idx) {
            out.warnings.push_back("selection named unknown passage '" + name + "'");
            continue;
        }
        if (linked[*idx].id == main.id) {
            out.warnings.push_back("selection named the main passage '" + name + "'");
            continue;
        }
        if (!taken.insert(*idx).second) continue;
        if (out.pair.supporting.size() == kMaxSupporting) {
            out.warnings.push_back("selection beyond " + std::to_string(kMaxSupporting) + " dropped: '" + name + "'");
            continue;
        }
        out.pair.supporting.push_back(linked[*idx]);
    }
    return out;
}

llm::GenerationParams default_generation_params() {
    llm::GenerationParams p;
    p.temperature = 0.7;
    return p;
}

GeneratedQuestion generate_question(const PassagePair& pair, HopMode mode, llm::ChatBackend& backend,
                                    std::size_t max_retries, const prompts::PromptRegistry& registry,
                                    const llm::GenerationParams& params) {
    if (mode == HopMode::multi_hop && pair.supporting.empty())
        throw std::invalid_argument("a multi-hop question needs at least one supporting passage");

    const auto prompt =
        mode == HopMode::single_hop
            ? registry.render(prompts::TemplateId::gen_singlehop, {{"passage", pair.main.text}})
            : registry.render(prompts::TemplateId::gen_multihop,
                              {{"main_passage", pair.main.text},
                               {"supporting_passages", agent::format_sources(pair.supporting)}});
    std::vector<llm::ChatMessage> messages{llm::user_message(prompt)};
    for (std::size_t attempt = 0;; ++attempt) {
        const auto reply = backend.chat(messages, params);
        const auto q = header_section(reply, "question");
        const auto a = header_section(reply, "answer");
        if (q && a && !q->empty() && !a->empty()) return {*q, *a, mode, pair};
        if (attempt >= max_retries)
            throw ForgeParseError("question generation: reply lacks '### Question:' and '### Answer:' sections");
        messages.push_back(llm::assistant_message(text::trim(reply).empty() ? "(empty reply)" : reply));
        messages.push_back(llm::user_message(std::string(kQuestionCorrection)));
    }
}

std::string format_history(const std::vector<agent::AgentStep>& steps) {
    if (steps.empty()) return "(none)";
    std::string out;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (i) out += "\n\n";
        out += "Step " + std::to_string(i + 1) + ":\n" + agent::format_step(steps[i]);
        if (steps[i].evidence) out += "\n### Evidence: " + *steps[i].evidence;
    }
    return out;
}

SolutionAnnotation annotate_solution(const GeneratedQuestion& question, llm::ChatBackend& backend,
                                     const AnnotateOptions& options, const prompts::PromptRegistry& registry) {
    if (options.max_steps == 0) throw std::invalid_argument("max_steps must be at least 1");
    SolutionAnnotation ann;
    ann.question = question;
    const auto sources = agent::format_sources(question.pair.sources());

    try {
        for (std::size_t t = 0; t < options.max_steps; ++t) {
            std::vector<llm::ChatMessage> messages{llm::user_message(registry.render(
                prompts::TemplateId::solution,
                {{"question", question.question}, {"history", format_history(ann.steps)}}))};
            std::optional<agent::AgentStep> step;
            for (std::size_t attempt = 0; !step; ++attempt) {
                const auto reply = backend.chat(messages, options.planner_params);
                try {
                    step = agent::parse_step(reply);
                } catch (const agent::StepParseError& e) {
                    if (attempt >= options.max_parse_retries) {
                        ann.failure = AnnotationFailure{FailureKind::parse, e.what()};
                        return ann;
                    }
                    messages.push_back(llm::assistant_message(text::trim(reply).empty() ? "(empty reply)" : reply));
                    messages.push_back(llm::user_message(std::string(agent::kFormatCorrection)));
                }
            }

            if (step->is_final()) {
                ann.terminal_thought_present = agent::is_terminal_thought(step->thought);
                ann.final_answer = std::string(text::trim(std::get<agent::FinalAnswerAction>(step->action).answer));
                ann.steps.push_back(std::move(*step));
                if (!ann.terminal_thought_present)
                    ann.failure = AnnotationFailure{FailureKind::no_terminal,
                                                    "final answer given without the terminal statement"};
                else if (ann.final_answer.empty())
                    ann.failure = AnnotationFailure{FailureKind::parse, "terminal step has no final answer"};
                return ann;
            }

            const auto raw = backend.chat(
                {llm::user_message(registry.render(prompts::TemplateId::extract_evidence,
                                                   {{"query", step->query()}, {"sources", sources}}))},
                options.evidence_params);
            auto reply = text::trim(raw);
            if (reply.size() >= 12 && text::iequals(reply.substr(0, 12), "### Evidence")) {
                reply.remove_prefix(12);
                if (!reply.empty() && reply.front() == ':') reply.remove_prefix(1);
                reply = text::trim(reply);
            }
            step->evidence = reply.empty() ? std::string(agent::kNoInformation) : std::string(reply);
            for (const auto& p : question.pair.sources()) step->retrieved.push_back(p.id);
            ann.steps.push_back(std::move(*step));
        }
        ann.failure = AnnotationFailure{FailureKind::max_steps, "no terminal statement within " +
                                                                    std::to_string(options.max_steps) + " steps"};
    } catch (const llm::BackendError& e) {
        ann.failure = AnnotationFailure{FailureKind::backend, e.what()};
    } catch (const llm::InvalidConversation& e) {
        ann.failure = AnnotationFailure{FailureKind::backend, e.what()};
    }
    return ann;
}

Verification verify_annotation(std::string_view question, std::string_view predicted, std::string_view reference,
                               llm::ChatBackend& judge, std::size_t max_retries,
                               const prompts::PromptRegistry& registry) {
    const int score = eval::judge_score(question, predicted, reference, judge, max_retries, registry);
    return {score, score >= kKeepThreshold};
}

} // namespace ragloop::forge
