#pragma once

#include "ragloop/error.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ragloop::agent {

/// Reflector feedback when retrieval yields nothing usable.
inline constexpr std::string_view kNoInformation = "No information found.";
/// Thought with which the planner declares it has gathered enough evidence.
inline constexpr std::string_view kTerminalThought = "I have the final answer";

struct SearchAction {
    std::string query;
    friend bool operator==(const SearchAction&, const SearchAction&) = default;
};

struct FinalAnswerAction {
    /// Answer text the planner wrote inline, possibly empty. The delivered
    /// answer comes from the dedicated final-answer call.
    std::string answer;
    friend bool operator==(const FinalAnswerAction&, const FinalAnswerAction&) = default;
};

using AgentAction = std::variant<SearchAction, FinalAnswerAction>;

struct AgentStep {
    std::string thought;
    AgentAction action;
    /// Reflector output; present only on executed search steps.
    std::optional<std::string> evidence;
    /// Passage ids the evidence was extracted from.
    std::vector<std::string> retrieved;
    /// Set when the query repeated an earlier one and the evidence came from cache.
    bool repeated_query{false};

    bool is_search() const noexcept { return std::holds_alternative<SearchAction>(action); }
    bool is_final() const noexcept { return std::holds_alternative<FinalAnswerAction>(action); }
    /// Search query; throws `std::logic_error` on a final-answer step.
    const std::string& query() const;

    friend bool operator==(const AgentStep&, const AgentStep&) = default;
};

class StepParseError : public Error {
public:
    using Error::Error;
};

/// True when `thought` contains the terminal statement (case-insensitive).
bool is_terminal_thought(std::string_view thought);

/// Parses one planner completion laid out with `### Thought:`,
/// `### Action - Search Input:` and `### Action - Final Answer:` headers.
///
/// Headers match case-insensitively, with or without leading `#` and with
/// arbitrary spacing around `-`. A terminal thought classifies the step as a
/// final answer even when no action header follows. Any `### Evidence:`
/// section written by the model is discarded.
AgentStep parse_step(std::string_view text);

/// Canonical Thought/Action rendering of a step (evidence excluded). A final
/// step with an empty inline answer renders as the thought line alone.
std::string format_step(const AgentStep& step);

} // namespace ragloop::agent
