#pragma once

#include "ragloop/agent/memory.hpp"
#include "ragloop/agent/step.hpp"
#include "ragloop/corpus/passage.hpp"
#include "ragloop/llm/chat.hpp"
#include "ragloop/prompts/registry.hpp"
#include "ragloop/retrieval/retriever.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ragloop::agent {

struct AgentConfig {
    /// Maximum number of searches; absent means "no limit" (the safety cap applies).
    std::optional<std::size_t> budget_k;
    std::size_t safety_cap{10};
    std::size_t top_k{8};
    bool use_reranker{false};
    std::size_t max_planner_parse_retries{2};
    /// Optional ceiling on stored evidence length, in bytes.
    std::optional<std::size_t> evidence_char_limit;
    llm::GenerationParams planner_params;
    llm::GenerationParams reflector_params;
    llm::GenerationParams answer_params;

    /// Effective search cap: `min(budget_k, safety_cap)`.
    std::size_t search_cap() const;
    /// Throws `ConfigError` on a zero budget, top_k or safety cap.
    void validate() const;
};

/// Models used by the three agent roles; they may all be the same backend.
struct AgentBackends {
    llm::BackendPtr planner;
    llm::BackendPtr reflector;
    llm::BackendPtr answerer;

    static AgentBackends shared(llm::BackendPtr backend) { return {backend, backend, backend}; }
    bool order_sensitive() const;
};

enum class Termination { planner_done, budget_exhausted, failed };

std::string_view to_string(Termination t);
Termination parse_termination(std::string_view name);

struct AgentTrace {
    std::string question;
    /// Executed steps; a completed trace ends with its final-answer step.
    std::vector<AgentStep> steps;
    std::string final_answer;
    Termination terminated_by{Termination::failed};
    std::size_t search_count{0};
    /// T: searches plus the final-answer step.
    std::size_t step_count{0};
    /// Cause of a failed run.
    std::optional<std::string> error;

    bool ok() const noexcept { return terminated_by != Termination::failed; }

    friend bool operator==(const AgentTrace&, const AgentTrace&) = default;
};

/// Planner output stayed unparseable through every allowed retry.
class PlannerProtocolError : public Error {
public:
    using Error::Error;
};

class AgentError : public Error {
public:
    using Error::Error;
};

/// User turn appended after an unparseable planner completion.
inline constexpr std::string_view kFormatCorrection =
    "Your last reply did not follow the required format. Reply with exactly one step:\n"
    "### Thought: <short rationale>\n"
    "### Action - Search Input: <search query>\n"
    "or, if the evidence is sufficient:\n"
    "### Thought: I have the final answer.";

/// Numbered source list used in evidence-extraction prompts.
std::string format_sources(const std::vector<corpus::Passage>& passages);
/// Numbered evidence list used in final-answer prompts.
std::string format_evidence_list(const std::vector<std::string>& evidence);

/// One planner decision over the current memory.
AgentStep plan_next(const WorkingMemory& memory, llm::ChatBackend& planner, const AgentConfig& config,
                    const prompts::PromptRegistry& registry = prompts::PromptRegistry::builtin());

/// Condenses retrieved passages into evidence for `query`, or `kNoInformation`.
/// Empty `docs` short-circuit without a model call.
std::string reflect_evidence(std::string_view query, const std::vector<corpus::Passage>& docs,
                             llm::ChatBackend& reflector,
                             const prompts::PromptRegistry& registry = prompts::PromptRegistry::builtin(),
                             const llm::GenerationParams& params = {});

/// Dedicated final-answer call over the question and all gathered evidence.
std::string final_answer(const WorkingMemory& memory, llm::ChatBackend& answerer,
                         const prompts::PromptRegistry& registry = prompts::PromptRegistry::builtin(),
                         const llm::GenerationParams& params = {});

/// Runs the plan/search/reflect loop until the planner finishes or the search
/// cap is reached, then asks for the final answer. Failures produce a trace
/// with `Termination::failed`, the steps executed so far and the error.
AgentTrace run_agent(const std::string& question, const AgentConfig& config,
                     const retrieval::Retriever& retriever, const AgentBackends& backends,
                     const prompts::PromptRegistry& registry = prompts::PromptRegistry::builtin());

/// Retriever settings implied by an agent config.
retrieval::Bm25RetrieverOptions retriever_options(const AgentConfig& config);

} // namespace ragloop::agent
