#pragma once

#include "ragloop/error.hpp"
#include "ragloop/llm/chat.hpp"
#include "ragloop/prompts/registry.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace ragloop::eval {

/// Judge output that never yielded a score in range.
class JudgeError : public Error {
public:
    using Error::Error;
};

class ShortAnswerError : public Error {
public:
    using Error::Error;
};

inline constexpr int kMinJudgeScore = 0;
inline constexpr int kMaxJudgeScore = 5;

inline constexpr std::string_view kJudgeCorrection =
    "Your reply did not end with a valid score. Reply with a line of the form:\nScore: <integer from 0 to 5>";

/// The integer after the last "Score:" label, or a leading integer when no
/// label is present. Values outside 0..5 are rejected.
std::optional<int> parse_judge_score(std::string_view completion);

/// Asks `judge` to compare `pred` with `ref`. Unusable replies are answered
/// with a correction turn up to `max_retries` times before `JudgeError`.
int judge_score(std::string_view question, std::string_view pred, std::string_view ref, llm::ChatBackend& judge,
                std::size_t max_retries = 2,
                const prompts::PromptRegistry& registry = prompts::PromptRegistry::builtin(),
                const llm::GenerationParams& params = {});

/// Few-shot extraction of the minimal answer span from a long answer.
/// Throws `std::invalid_argument` on a blank long answer and
/// `ShortAnswerError` when the model returns nothing usable.
std::string extract_short_answer(std::string_view question, std::string_view long_answer,
                                 llm::ChatBackend& backend,
                                 const prompts::PromptRegistry& registry = prompts::PromptRegistry::builtin(),
                                 const llm::GenerationParams& params = {});

} // namespace ragloop::eval
