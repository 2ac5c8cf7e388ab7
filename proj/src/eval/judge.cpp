#include "ragloop/eval/judge.hpp"

#include "ragloop/text/tokenizer.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace ragloop::eval {

namespace {

std::optional<int> leading_int(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '*')) ++i;
    std::size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == start || i - start > 3) return std::nullopt;
    // "4.5" is not an integer score.
    if (i + 1 < s.size() && s[i] == '.' && std::isdigit(static_cast<unsigned char>(s[i + 1]))) return std::nullopt;
    return std::stoi(std::string(s.substr(start, i - start)));
}

std::optional<int> in_range(std::optional<int> v) {
    if (v && (*v < kMinJudgeScore || *v > kMaxJudgeScore)) return std::nullopt;
    return v;
}

} // namespace

std::optional<int> parse_judge_score(std::string_view completion) {
    const std::string lower = text::to_lower(completion);
    std::optional<std::size_t> value_at;
    for (auto pos = lower.find("score"); pos != std::string::npos; pos = lower.find("score", pos + 1)) {
        std::size_t i = pos + 5;
        while (i < lower.size() && (lower[i] == ' ' || lower[i] == '*')) ++i;
        if (i < lower.size() && lower[i] == ':') value_at = i + 1;
    }
    if (value_at) return in_range(leading_int(std::string_view(lower).substr(*value_at)));
    return in_range(leading_int(text::trim(completion)));
}

int judge_score(std::string_view question, std::string_view pred, std::string_view ref, llm::ChatBackend& judge,
                std::size_t max_retries, const prompts::PromptRegistry& registry,
                const llm::GenerationParams& params) {
    std::vector<llm::ChatMessage> messages{llm::user_message(
        registry.render(prompts::TemplateId::gpt_score, {{"question", std::string(question)},
                                                         {"reference_answer", std::string(ref)},
                                                         {"predicted_answer", std::string(pred)}}))};
    std::string reply;
    for (std::size_t attempt = 0;; ++attempt) {
        reply = judge.chat(messages, params);
        if (auto score = parse_judge_score(reply)) return *score;
        if (attempt == max_retries) break;
        messages.push_back(llm::assistant_message(reply.empty() ? "(empty)" : reply));
        messages.push_back(llm::user_message(std::string(kJudgeCorrection)));
    }
    throw JudgeError("no valid score after " + std::to_string(max_retries + 1) + " judge replies; last: '" +
                     std::string(text::trim(reply)).substr(0, 200) + "'");
}

std::string extract_short_answer(std::string_view question, std::string_view long_answer,
                                 llm::ChatBackend& backend, const prompts::PromptRegistry& registry,
                                 const llm::GenerationParams& params) {
    if (text::trim(long_answer).empty()) throw std::invalid_argument("long answer is empty");
    const std::string reply = backend.chat(
        {llm::user_message(registry.render(prompts::TemplateId::extract_short_answer,
                                           {{"question", std::string(question)},
                                            {"long_answer", std::string(long_answer)}}))},
        params);

    std::istringstream in(reply);
    std::string line;
    while (std::getline(in, line)) {
        std::string_view v = text::trim(line);
        if (v.empty()) continue;
        constexpr std::string_view label = "short answer:";
        if (v.size() >= label.size() && text::iequals(v.substr(0, label.size()), label))
            v = text::trim(v.substr(label.size()));
        if (!v.empty()) return std::string(v);
    }
    throw ShortAnswerError("short-answer extraction returned no text");
}

} // namespace ragloop::eval
