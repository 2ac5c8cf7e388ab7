#pragma once

#include "ragloop/forge/types.hpp"
#include "ragloop/prompts/registry.hpp"

#include <array>
#include <map>
#include <string>
#include <vector>

namespace ragloop::forge {

/// Closing planner response of every planner record.
inline constexpr std::string_view kTerminalTurn = "### Thought: I have the final answer.";

/// Planner, final-answer and reflector records for one kept annotation.
///
/// The planner record replays the working memory: system prompt, question,
/// then (thought + query, evidence) pairs and the terminal turn. The
/// final-answer record pairs the question and all evidence with the answer.
/// The reflector record holds one (query + sources, evidence) exchange per
/// search. Throws `std::invalid_argument` for a failed, unverified or
/// dropped annotation, or one without searches.
std::array<TrainingRecord, 3> emit_training_records(
    const SolutionAnnotation& annotation,
    const prompts::PromptRegistry& registry = prompts::PromptRegistry::builtin());

/// True on assistant turns, false elsewhere.
std::vector<bool> assistant_mask(const std::vector<llm::ChatMessage>& turns);

/// Negative log-likelihood summed over masked-in tokens:
/// -sum_j logprob_j * mask_j. Throws `std::invalid_argument` when the lengths
/// differ or a logprob is positive or NaN.
double masked_loss(const std::vector<double>& token_logprobs, const std::vector<bool>& mask);

/// Leading interrogative of a question: how, what, why, which, who, where,
/// when, or "other".
std::string question_type(std::string_view question);

/// Counts per question type; only types that occur are present.
std::map<std::string, std::size_t> question_type_stats(const std::vector<std::string>& questions);

} // namespace ragloop::forge
