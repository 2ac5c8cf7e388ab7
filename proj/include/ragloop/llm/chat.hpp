#pragma once

#include "ragloop/error.hpp"

#include <json.hpp>

#include <condition_variable>
#include <cstddef>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace ragloop::llm {

enum class Role { system, user, assistant };

std::string_view to_string(Role role);
Role parse_role(std::string_view name);

struct ChatMessage {
    Role role{Role::user};
    std::string content;

    friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

inline ChatMessage system_message(std::string content) { return {Role::system, std::move(content)}; }
inline ChatMessage user_message(std::string content) { return {Role::user, std::move(content)}; }
inline ChatMessage assistant_message(std::string content) { return {Role::assistant, std::move(content)}; }

struct GenerationParams {
    double temperature{0.0};
    int max_tokens{1024};
    std::vector<std::string> stop;

    friend bool operator==(const GenerationParams&, const GenerationParams&) = default;
};

/// Message list violating the role or content rules.
class InvalidConversation : public Error {
public:
    using Error::Error;
};

/// Failure of the backend itself, as opposed to unusable model output.
class BackendError : public Error {
public:
    using Error::Error;
};

class ChatTransportError : public BackendError {
public:
    using BackendError::BackendError;
};

class ChatHttpError : public BackendError {
public:
    ChatHttpError(int status, const std::string& what) : BackendError(what), status_(status) {}
    int status() const noexcept { return status_; }

private:
    int status_;
};

/// The server answered 2xx with a body lacking `choices[0].message.content`.
class ChatProtocolError : public BackendError {
public:
    using BackendError::BackendError;
};

class ScriptExhausted : public BackendError {
public:
    explicit ScriptExhausted(std::size_t call_index);
};

class ScriptMismatch : public BackendError {
public:
    ScriptMismatch(std::size_t call_index, const std::string& expected);
    std::size_t call_index() const noexcept { return call_index_; }

private:
    std::size_t call_index_;
};

/// Non-empty contents; optional leading system message; then turns starting
/// with user and alternating user/assistant.
void validate_conversation(const std::vector<ChatMessage>& messages);

/// A chat-completion backend shared by every component that talks to a model.
///
/// `chat` validates the conversation and enforces the in-flight cap before
/// delegating to `complete`.
class ChatBackend {
public:
    explicit ChatBackend(std::size_t max_in_flight = 8);
    virtual ~ChatBackend() = default;
    ChatBackend(const ChatBackend&) = delete;
    ChatBackend& operator=(const ChatBackend&) = delete;

    std::string chat(const std::vector<ChatMessage>& messages, const GenerationParams& params = {});

    /// True when responses depend on call order, so callers must not issue
    /// concurrent requests.
    virtual bool order_sensitive() const { return false; }

    /// Human-readable identity for reports; never includes credentials.
    virtual std::string describe() const = 0;

    std::size_t max_in_flight() const noexcept { return max_in_flight_; }

protected:
    virtual std::string complete(const std::vector<ChatMessage>& messages, const GenerationParams& params) = 0;

private:
    std::size_t max_in_flight_;
    std::size_t in_flight_{0};
    std::mutex mu_;
    std::condition_variable cv_;
};

using BackendPtr = std::shared_ptr<ChatBackend>;

nlohmann::json to_json(const ChatMessage& message);
ChatMessage message_from_json(const nlohmann::json& j);
nlohmann::json to_json(const std::vector<ChatMessage>& messages);
std::vector<ChatMessage> messages_from_json(const nlohmann::json& j);

/// Replaces every occurrence of `secret` in `text` with a fixed mask.
std::string redact(std::string text, std::string_view secret);

} // namespace ragloop::llm
