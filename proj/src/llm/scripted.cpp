#include "ragloop/llm/scripted.hpp"

#include "ragloop/error.hpp"

#include <fstream>
#include <stdexcept>

namespace ragloop::llm {

using nlohmann::json;

ScriptedBackend::ScriptedBackend(std::vector<ScriptEntry> script, std::string name)
    : ChatBackend(1), script_(std::move(script)), name_(std::move(name)) {
    if (script_.empty()) throw std::invalid_argument("scripted backend needs at least one response");
}

std::string ScriptedBackend::describe() const {
    return name_ + " (scripted, " + std::to_string(script_.size()) + " responses)";
}

std::string ScriptedBackend::complete(const std::vector<ChatMessage>& messages, const GenerationParams& params) {
    std::lock_guard lock(mu_);
    const std::size_t call = next_;
    if (call >= script_.size()) throw ScriptExhausted(call);
    const auto& entry = script_[call];
    if (entry.expect) {
        bool found = false;
        for (const auto& m : messages) found = found || m.content.find(*entry.expect) != std::string::npos;
        if (!found) throw ScriptMismatch(call, *entry.expect);
    }
    ++next_;
    transcript_.push_back({call, messages, params, entry.response});
    return entry.response;
}

std::vector<TranscriptEntry> ScriptedBackend::transcript() const {
    std::lock_guard lock(mu_);
    return transcript_;
}

std::size_t ScriptedBackend::calls() const {
    std::lock_guard lock(mu_);
    return next_;
}

std::size_t ScriptedBackend::remaining() const {
    std::lock_guard lock(mu_);
    return script_.size() - next_;
}

std::shared_ptr<ScriptedBackend> make_scripted(std::vector<ScriptEntry> script, std::string name) {
    return std::make_shared<ScriptedBackend>(std::move(script), std::move(name));
}

std::shared_ptr<ScriptedBackend> make_scripted(const std::vector<std::string>& responses, std::string name) {
    std::vector<ScriptEntry> script;
    script.reserve(responses.size());
    for (const auto& r : responses) script.push_back({r, std::nullopt});
    return make_scripted(std::move(script), std::move(name));
}

std::vector<ScriptEntry> parse_script(const json& j) {
    const json& list = j.is_object() ? j.at("responses") : j;
    if (!list.is_array()) throw ConfigError("script must be a JSON array of responses");
    std::vector<ScriptEntry> out;
    for (const auto& e : list) {
        if (e.is_string()) {
            out.push_back({e.get<std::string>(), std::nullopt});
        } else if (e.is_object()) {
            ScriptEntry entry{e.at("response").get<std::string>(), std::nullopt};
            if (e.contains("expect")) entry.expect = e.at("expect").get<std::string>();
            out.push_back(std::move(entry));
        } else {
            throw ConfigError("script entries must be strings or objects");
        }
    }
    return out;
}

std::vector<ScriptEntry> load_script(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open script file: " + path.string());
    try {
        return parse_script(json::parse(in));
    } catch (const json::exception& e) {
        throw ConfigError("invalid script file " + path.string() + ": " + e.what());
    }
}

json transcript_to_json(const std::vector<TranscriptEntry>& transcript) {
    json arr = json::array();
    for (const auto& t : transcript) {
        arr.push_back({{"call", t.call_index},
                       {"messages", to_json(t.messages)},
                       {"params",
                        {{"temperature", t.params.temperature},
                         {"max_tokens", t.params.max_tokens},
                         {"stop", t.params.stop}}},
                       {"response", t.response}});
    }
    return arr;
}

std::vector<TranscriptEntry> transcript_from_json(const json& j) {
    std::vector<TranscriptEntry> out;
    for (const auto& e : j) {
        TranscriptEntry t;
        t.call_index = e.at("call").get<std::size_t>();
        t.messages = messages_from_json(e.at("messages"));
        t.params.temperature = e.at("params").at("temperature").get<double>();
        t.params.max_tokens = e.at("params").at("max_tokens").get<int>();
        t.params.stop = e.at("params").at("stop").get<std::vector<std::string>>();
        t.response = e.at("response").get<std::string>();
        out.push_back(std::move(t));
    }
    return out;
}

} // namespace ragloop::llm
