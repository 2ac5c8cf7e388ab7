#include "ragloop/forge/records.hpp"

#include "ragloop/agent/agent.hpp"
#include "ragloop/agent/memory.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace ragloop::forge {

std::vector<bool> assistant_mask(const std::vector<llm::ChatMessage>& turns) {
    std::vector<bool> mask;
    mask.reserve(turns.size());
    for (const auto& t : turns) mask.push_back(t.role == llm::Role::assistant);
    return mask;
}

std::array<TrainingRecord, 3> emit_training_records(const SolutionAnnotation& annotation,
                                                    const prompts::PromptRegistry& registry) {
    if (!annotation.ok()) throw std::invalid_argument("annotation failed: " + annotation.failure->message);
    if (!annotation.verification_score) throw std::invalid_argument("annotation has not been verified");
    if (!annotation.kept())
        throw std::invalid_argument("annotation scored " + std::to_string(*annotation.verification_score) +
                                    ", below the keep threshold");
    if (!annotation.well_formed()) throw std::invalid_argument("annotation is not well formed");
    if (annotation.search_count() == 0) throw std::invalid_argument("annotation has no search steps");

    const auto& question = annotation.question.question;
    agent::WorkingMemory memory{question, {}};
    for (const auto& s : annotation.steps)
        if (s.is_search()) memory.steps.push_back(s);

    TrainingRecord planner{RecordKind::planner,
                           agent::serialize_memory(memory, registry.render(prompts::TemplateId::train_solve, {})),
                           {}};
    planner.turns.push_back(llm::assistant_message(std::string(kTerminalTurn)));
    planner.response_mask = assistant_mask(planner.turns);

    TrainingRecord answer{RecordKind::final_answer,
                          {llm::user_message(registry.render(
                               prompts::TemplateId::train_final_answer,
                               {{"question", question},
                                {"evidence", agent::format_evidence_list(annotation.evidence())}})),
                           llm::assistant_message(annotation.final_answer)},
                          {}};
    answer.response_mask = assistant_mask(answer.turns);

    TrainingRecord reflector{RecordKind::reflector, {}, {}};
    const auto sources = agent::format_sources(annotation.question.pair.sources());
    for (const auto& s : memory.steps) {
        reflector.turns.push_back(llm::user_message(registry.render(
            prompts::TemplateId::train_extract_evidence, {{"query", s.query()}, {"sources", sources}})));
        reflector.turns.push_back(llm::assistant_message(*s.evidence));
    }
    reflector.response_mask = assistant_mask(reflector.turns);

    return {std::move(planner), std::move(answer), std::move(reflector)};
}

double masked_loss(const std::vector<double>& token_logprobs, const std::vector<bool>& mask) {
    if (token_logprobs.size() != mask.size())
        throw std::invalid_argument("logprobs and mask differ in length (" + std::to_string(token_logprobs.size()) +
                                    " vs " + std::to_string(mask.size()) + ")");
    double loss = 0.0;
    for (std::size_t j = 0; j < mask.size(); ++j) {
        const double lp = token_logprobs[j];
        if (std::isnan(lp) || lp > 0.0)
            throw std::invalid_argument("logprob at position " + std::to_string(j) + " is not <= 0");
        if (mask[j]) loss -= lp;
    }
    return loss;
}

std::string question_type(std::string_view question) {
    static constexpr std::array<std::string_view, 7> kTypes{"how", "what", "why", "which", "who", "where", "when"};
    std::size_t i = 0;
    while (i < question.size() && std::isspace(static_cast<unsigned char>(question[i]))) ++i;
    std::string word;
    while (i < question.size() && std::isalpha(static_cast<unsigned char>(question[i])))
        word.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(question[i++]))));
    for (auto t : kTypes)
        if (word == t) return word;
    return "other";
}

std::map<std::string, std::size_t> question_type_stats(const std::vector<std::string>& questions) {
    std::map<std::string, std::size_t> out;
    for (const auto& q : questions) ++out[question_type(q)];
    return out;
}

} // namespace ragloop::forge
