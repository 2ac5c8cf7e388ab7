#include "ragloop/llm/chat.hpp"

#include "ragloop/text/tokenizer.hpp"

namespace ragloop::llm {

using nlohmann::json;

std::string_view to_string(Role role) {
    switch (role) {
    case Role::system: return "system";
    case Role::user: return "user";
    case Role::assistant: return "assistant";
    }
    return "user";
}

Role parse_role(std::string_view name) {
    if (name == "system") return Role::system;
    if (name == "user") return Role::user;
    if (name == "assistant") return Role::assistant;
    throw InvalidConversation("unknown role '" + std::string(name) + "'");
}

ScriptExhausted::ScriptExhausted(std::size_t call_index)
    : BackendError("script exhausted at call " + std::to_string(call_index)) {}

ScriptMismatch::ScriptMismatch(std::size_t call_index, const std::string& expected)
    : BackendError("call " + std::to_string(call_index) + ": request does not contain expected text '" +
                   expected + "'"),
      call_index_(call_index) {}

void validate_conversation(const std::vector<ChatMessage>& messages) {
    if (messages.empty()) throw InvalidConversation("conversation is empty");
    std::size_t i = 0;
    if (messages.front().role == Role::system) ++i;
    if (i == messages.size()) throw InvalidConversation("conversation holds only a system message");
    Role expected = Role::user;
    for (std::size_t k = 0; k < messages.size(); ++k) {
        if (text::trim(messages[k].content).empty())
            throw InvalidConversation("message " + std::to_string(k) + " has empty content");
        if (k < i) continue;
        if (messages[k].role != expected)
            throw InvalidConversation("message " + std::to_string(k) + " has role " +
                                      std::string(to_string(messages[k].role)) + ", expected " +
                                      std::string(to_string(expected)));
        expected = expected == Role::user ? Role::assistant : Role::user;
    }
}

ChatBackend::ChatBackend(std::size_t max_in_flight) : max_in_flight_(max_in_flight == 0 ? 1 : max_in_flight) {}

std::string ChatBackend::chat(const std::vector<ChatMessage>& messages, const GenerationParams& params) {
    validate_conversation(messages);
    {
        std::unique_lock lock(mu_);
        cv_.wait(lock, [&] { return in_flight_ < max_in_flight_; });
        ++in_flight_;
    }
    struct Release {
        ChatBackend& self;
        ~Release() {
            {
                std::lock_guard lock(self.mu_);
                --self.in_flight_;
            }
            self.cv_.notify_one();
        }
    } release{*this};
    return complete(messages, params);
}

json to_json(const ChatMessage& message) {
    return json{{"role", to_string(message.role)}, {"content", message.content}};
}

ChatMessage message_from_json(const json& j) {
    return {parse_role(j.at("role").get<std::string>()), j.at("content").get<std::string>()};
}

json to_json(const std::vector<ChatMessage>& messages) {
    json arr = json::array();
    for (const auto& m : messages) arr.push_back(to_json(m));
    return arr;
}

std::vector<ChatMessage> messages_from_json(const json& j) {
    std::vector<ChatMessage> out;
    for (const auto& m : j) out.push_back(message_from_json(m));
    return out;
}

std::string redact(std::string text, std::string_view secret) {
    if (secret.empty()) return text;
    static constexpr std::string_view mask = "[REDACTED]";
    for (auto pos = text.find(secret); pos != std::string::npos; pos = text.find(secret, pos + mask.size()))
        text.replace(pos, secret.size(), mask);
    return text;
}

} // namespace ragloop::llm
