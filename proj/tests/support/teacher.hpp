#pragma once

#include "ragloop/llm/chat.hpp"

#include <atomic>
#include <regex>
#include <string>
#include <vector>

namespace ragloop::testing {

/// Answers every forge prompt from its content, so it is safe to call concurrently.
class FakeTeacher final : public llm::ChatBackend {
public:
    explicit FakeTeacher(int score = 5) : score_(score) {}
    std::string describe() const override { return "fake-teacher"; }
    std::atomic<int> calls{0};

protected:
    std::string complete(const std::vector<llm::ChatMessage>& messages, const llm::GenerationParams&) override {
        ++calls;
        const auto& p = messages.front().content;
        if (p.find("Select the linked passages") != std::string::npos) {
            static const std::regex id_re(R"(\[(art\d+)\])");
            std::string out;
            for (std::sregex_iterator it(p.begin(), p.end(), id_re), end; it != end; ++it) out += (*it)[1].str() + "\n";
            return out;
        }
        if (p.find("### Question: <the question>") != std::string::npos) {
            const auto at = p.find("topic ");
            return "### Question: What is said about " + p.substr(at, p.find(' ', at + 6) - at) +
                   "?\n### Answer: It is described in detail.";
        }
        if (p.find("Previous steps:\n(none)") != std::string::npos)
            return "### Thought: Search for it.\n### Action - Search Input: details of the topic";
        if (p.find("Previous steps:") != std::string::npos)
            return "### Thought: I have the final answer\n### Action - Final Answer: It is described in detail.";
        if (p.find("Search query:") != std::string::npos) return "The topic is described in detail.";
        if (p.find("Reference answer:") != std::string::npos) return "Score: " + std::to_string(score_);
        return "unexpected prompt";
    }

private:
    int score_;
};

} // namespace ragloop::testing
