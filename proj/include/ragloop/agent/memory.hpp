#pragma once

#include "ragloop/agent/step.hpp"
#include "ragloop/llm/chat.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ragloop::agent {

/// Question plus executed steps, in execution order.
struct WorkingMemory {
    std::string question;
    std::vector<AgentStep> steps;

    /// Evidence strings of executed search steps, in order.
    std::vector<std::string> evidence() const;
};

/// Prefix marking evidence served from the loop-local cache.
inline constexpr std::string_view kRepeatedQueryNote =
    "(repeated query; evidence from the earlier identical search) ";

/// User turn carrying a step's evidence back to the planner.
std::string evidence_turn(const AgentStep& step);

/// Conversation view of memory: optional system prompt, the question as the
/// first user turn, then for each step an assistant Thought/Action turn and,
/// if executed, a user evidence turn.
std::vector<llm::ChatMessage> serialize_memory(const WorkingMemory& memory,
                                               const std::optional<std::string>& system_prompt = std::nullopt);

/// Inverse of `serialize_memory`. Throws `StepParseError` on malformed input.
WorkingMemory deserialize_memory(const std::vector<llm::ChatMessage>& messages);

} // namespace ragloop::agent
