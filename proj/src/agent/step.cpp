#include "ragloop/agent/step.hpp"

#include "ragloop/text/tokenizer.hpp"

#include <sstream>
#include <stdexcept>

namespace ragloop::agent {

namespace {

enum class Header { thought, search, final_answer, evidence };

struct Section {
    Header header;
    std::string body;
};

/// Recognizes a header line; `rest` receives the text after its colon.
std::optional<Header> match_header(std::string_view line, std::string_view& rest) {
    auto s = text::trim(line);
    while (!s.empty() && (s.front() == '#' || s.front() == '*')) s.remove_prefix(1);
    const auto colon = s.find(':');
    if (colon == std::string_view::npos || colon > 40) return std::nullopt;

    std::string label;
    for (char c : s.substr(0, colon)) {
        if (c == '*') continue;
        label.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    label = text::collapse_whitespace(label);
    for (auto pos = label.find(" -"); pos != std::string::npos; pos = label.find(" -")) label.erase(pos, 1);
    for (auto pos = label.find("- "); pos != std::string::npos; pos = label.find("- ")) label.erase(pos + 1, 1);

    std::optional<Header> h;
    if (label == "thought") h = Header::thought;
    else if (label == "action-search input" || label == "action-search" || label == "search input") h = Header::search;
    else if (label == "action-final answer" || label == "final answer") h = Header::final_answer;
    else if (label == "evidence") h = Header::evidence;
    if (!h) return std::nullopt;

    rest = s.substr(colon + 1);
    while (!rest.empty() && rest.front() == '*') rest.remove_prefix(1);
    return h;
}

std::vector<Section> split_sections(std::string_view text) {
    std::vector<Section> sections;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string_view rest;
        if (auto h = match_header(line, rest)) {
            sections.push_back({*h, std::string(rest)});
        } else if (!sections.empty()) {
            sections.back().body += '\n';
            sections.back().body += line;
        }
    }
    for (auto& s : sections) s.body = std::string(text::trim(s.body));
    return sections;
}

} // namespace

const std::string& AgentStep::query() const {
    if (const auto* s = std::get_if<SearchAction>(&action)) return s->query;
    throw std::logic_error("final-answer step has no search query");
}

bool is_terminal_thought(std::string_view thought) { return text::icontains(thought, kTerminalThought); }

AgentStep parse_step(std::string_view text) {
    const auto sections = split_sections(text);
    if (sections.empty()) throw StepParseError("planner output has no Thought/Action headers");

    AgentStep step;
    bool have_thought = false;
    const Section* action = nullptr;
    const Section* final_section = nullptr;
    for (const auto& s : sections) {
        if (s.header == Header::thought && !have_thought) {
            step.thought = s.body;
            have_thought = true;
        } else if ((s.header == Header::search || s.header == Header::final_answer) && !action) {
            action = &s;
        }
        if (s.header == Header::final_answer && !final_section) final_section = &s;
    }

    if (have_thought && is_terminal_thought(step.thought)) {
        step.action = FinalAnswerAction{final_section ? final_section->body : std::string()};
        return step;
    }
    if (!action) throw StepParseError("planner output has no action");
    if (action->header == Header::final_answer) {
        step.action = FinalAnswerAction{action->body};
        return step;
    }
    if (action->body.empty()) throw StepParseError("search action has an empty query");
    step.action = SearchAction{action->body};
    return step;
}

std::string format_step(const AgentStep& step) {
    std::string out = "### Thought: " + step.thought;
    if (const auto* s = std::get_if<SearchAction>(&step.action)) {
        out += "\n### Action - Search Input: " + s->query;
    } else if (const auto& answer = std::get<FinalAnswerAction>(step.action).answer; !answer.empty()) {
        out += "\n### Action - Final Answer: " + answer;
    }
    return out;
}

} // namespace ragloop::agent
