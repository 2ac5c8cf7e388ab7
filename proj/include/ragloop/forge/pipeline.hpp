#pragma once

#include "ragloop/forge/types.hpp"
#include "ragloop/prompts/registry.hpp"

#include <string>
#include <vector>

namespace ragloop::forge {

class ForgeError : public Error {
public:
    using Error::Error;
};

/// Model output that stayed unusable through every retry.
class ForgeParseError : public ForgeError {
public:
    using ForgeError::ForgeError;
};

struct SupportSelection {
    PassagePair pair;
    /// Names the model gave that matched no candidate, and dropped extras.
    std::vector<std::string> warnings;
};

/// Asks `backend` which linked passages relate to `main` and keeps at most
/// five, in the order given. Replies name candidates by id or by title; a
/// reply of NONE selects nothing. An empty `linked` list makes no call.
SupportSelection select_supporting(const corpus::Passage& main, const std::vector<corpus::Passage>& linked,
                                   llm::ChatBackend& backend, std::size_t max_retries = 1,
                                   const prompts::PromptRegistry& registry = prompts::PromptRegistry::builtin(),
                                   const llm::GenerationParams& params = {});

/// Sampling parameters used for question generation unless overridden.
llm::GenerationParams default_generation_params();

/// Throws `std::invalid_argument` for a multi-hop request without supporting
/// passages and `ForgeParseError` when no `### Question:` / `### Answer:`
/// pair can be read.
GeneratedQuestion generate_question(const PassagePair& pair, HopMode mode, llm::ChatBackend& backend,
                                    std::size_t max_retries = 1,
                                    const prompts::PromptRegistry& registry = prompts::PromptRegistry::builtin(),
                                    const llm::GenerationParams& params = default_generation_params());

struct AnnotateOptions {
    /// Planner calls allowed, final step included.
    std::size_t max_steps{6};
    std::size_t max_parse_retries{1};
    llm::GenerationParams planner_params;
    llm::GenerationParams evidence_params;
};

/// Teacher trajectory over the pair's sources. Never throws for model or
/// backend trouble: the annotation records the failure and the steps so far.
SolutionAnnotation annotate_solution(const GeneratedQuestion& question, llm::ChatBackend& backend,
                                     const AnnotateOptions& options = {},
                                     const prompts::PromptRegistry& registry = prompts::PromptRegistry::builtin());

/// Renders earlier steps for the solution prompt.
std::string format_history(const std::vector<agent::AgentStep>& steps);

inline constexpr int kKeepThreshold = 4;

struct Verification {
    int score{0};
    bool keep{false};
};

/// Judges `predicted` against `reference`; keep iff the score is 4 or 5.
/// Throws `eval::JudgeError` when no score can be parsed.
Verification verify_annotation(std::string_view question, std::string_view predicted, std::string_view reference,
                               llm::ChatBackend& judge, std::size_t max_retries = 2,
                               const prompts::PromptRegistry& registry = prompts::PromptRegistry::builtin());

} // namespace ragloop::forge
