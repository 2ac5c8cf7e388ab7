#include "ragloop/agent/memory.hpp"

namespace ragloop::agent {

namespace {
constexpr std::string_view kEvidenceHeader = "### Evidence: ";
}

std::vector<std::string> WorkingMemory::evidence() const {
    std::vector<std::string> out;
    for (const auto& s : steps) {
        if (s.evidence) out.push_back(*s.evidence);
    }
    return out;
}

std::string evidence_turn(const AgentStep& step) {
    std::string out(kEvidenceHeader);
    if (step.repeated_query) out += kRepeatedQueryNote;
    out += step.evidence.value_or(std::string());
    return out;
}

std::vector<llm::ChatMessage> serialize_memory(const WorkingMemory& memory,
                                               const std::optional<std::string>& system_prompt) {
    std::vector<llm::ChatMessage> out;
    if (system_prompt) out.push_back(llm::system_message(*system_prompt));
    out.push_back(llm::user_message(memory.question));
    for (const auto& step : memory.steps) {
        out.push_back(llm::assistant_message(format_step(step)));
        if (step.evidence) out.push_back(llm::user_message(evidence_turn(step)));
    }
    return out;
}

WorkingMemory deserialize_memory(const std::vector<llm::ChatMessage>& messages) {
    std::size_t i = 0;
    if (i < messages.size() && messages[i].role == llm::Role::system) ++i;
    if (i >= messages.size() || messages[i].role != llm::Role::user)
        throw StepParseError("conversation does not start with the question");

    WorkingMemory memory;
    memory.question = messages[i++].content;
    for (; i < messages.size(); ++i) {
        const auto& m = messages[i];
        if (m.role == llm::Role::assistant) {
            memory.steps.push_back(parse_step(m.content));
            continue;
        }
        if (m.role != llm::Role::user || memory.steps.empty() || memory.steps.back().evidence ||
            !memory.steps.back().is_search())
            throw StepParseError("unexpected message at position " + std::to_string(i));
        std::string_view body = m.content;
        if (!body.starts_with(kEvidenceHeader))
            throw StepParseError("user turn " + std::to_string(i) + " is not an evidence turn");
        body.remove_prefix(kEvidenceHeader.size());
        auto& step = memory.steps.back();
        if (body.starts_with(kRepeatedQueryNote)) {
            step.repeated_query = true;
            body.remove_prefix(kRepeatedQueryNote.size());
        }
        step.evidence = std::string(body);
    }
    return memory;
}

} // namespace ragloop::agent
