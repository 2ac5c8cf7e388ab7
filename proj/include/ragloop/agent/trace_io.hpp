#pragma once

#include "ragloop/agent/agent.hpp"

#include <json.hpp>

namespace ragloop::agent {

inline constexpr std::string_view kTraceSchema = "ragloop.trace/1";

nlohmann::json to_json(const AgentStep& step);
AgentStep step_from_json(const nlohmann::json& j);

nlohmann::json to_json(const AgentTrace& trace);
/// Throws `std::invalid_argument` on schema mismatch or missing fields.
AgentTrace trace_from_json(const nlohmann::json& j);

/// Config echo for reports; contains no credentials.
nlohmann::json to_json(const AgentConfig& config);
nlohmann::json to_json(const llm::GenerationParams& params);

/// Human-readable transcript in the `### Thought / ### Action / ### Evidence`
/// layout, ending with the delivered final answer and termination metadata.
std::string render_transcript(const AgentTrace& trace);

} // namespace ragloop::agent
