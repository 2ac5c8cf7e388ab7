#pragma once

#include "ragloop/llm/chat.hpp"

#include <filesystem>
#include <optional>

namespace ragloop::llm {

struct ScriptEntry {
    std::string response;
    /// When set, the request must contain this substring in some message.
    std::optional<std::string> expect;

    friend bool operator==(const ScriptEntry&, const ScriptEntry&) = default;
};

struct TranscriptEntry {
    std::size_t call_index{0};
    std::vector<ChatMessage> messages;
    GenerationParams params;
    std::string response;

    friend bool operator==(const TranscriptEntry&, const TranscriptEntry&) = default;
};

/// Deterministic backend replaying a fixed list of responses in order and
/// recording every request. Consumption is serialized internally.
class ScriptedBackend final : public ChatBackend {
public:
    /// Throws `std::invalid_argument` for an empty script.
    explicit ScriptedBackend(std::vector<ScriptEntry> script, std::string name = "scripted");

    bool order_sensitive() const override { return true; }
    std::string describe() const override;

    std::vector<TranscriptEntry> transcript() const;
    std::size_t calls() const;
    std::size_t remaining() const;

protected:
    std::string complete(const std::vector<ChatMessage>& messages, const GenerationParams& params) override;

private:
    std::vector<ScriptEntry> script_;
    std::string name_;
    std::size_t next_{0};
    std::vector<TranscriptEntry> transcript_;
    mutable std::mutex mu_;
};

std::shared_ptr<ScriptedBackend> make_scripted(std::vector<ScriptEntry> script, std::string name = "scripted");
std::shared_ptr<ScriptedBackend> make_scripted(const std::vector<std::string>& responses,
                                               std::string name = "scripted");

/// Script file: a JSON array, or an object with a "responses" array; each
/// entry a string or `{"response": "...", "expect": "..."}`.
std::vector<ScriptEntry> parse_script(const nlohmann::json& j);
std::vector<ScriptEntry> load_script(const std::filesystem::path& path);

nlohmann::json transcript_to_json(const std::vector<TranscriptEntry>& transcript);
std::vector<TranscriptEntry> transcript_from_json(const nlohmann::json& j);

} // namespace ragloop::llm
