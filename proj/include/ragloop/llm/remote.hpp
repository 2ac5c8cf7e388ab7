#pragma once

#include "ragloop/llm/chat.hpp"

#include <atomic>
#include <chrono>
#include <functional>
#include <random>

namespace ragloop::llm {

/// Exponential backoff with jitter, applied to HTTP 429, 5xx and transport
/// failures. Total attempts never exceed `1 + max_retries`.
struct RetryPolicy {
    int max_retries{5};
    std::chrono::milliseconds base_delay{1000};
    std::chrono::milliseconds max_delay{30000};
    bool jitter{true};

    /// Delay before retry number `retry` (0-based), given a uniform draw in [0, 1).
    std::chrono::milliseconds delay(int retry, double unit_draw) const;
};

struct RemoteConfig {
    std::string base_url; ///< e.g. https://api.openai.com/v1
    std::string model;
    std::string api_key;
    std::chrono::milliseconds timeout{std::chrono::seconds(120)};
    RetryPolicy retry;
    std::size_t max_in_flight{8};
};

using LogSink = std::function<void(std::string_view)>;

/// Chat-completions client: POST `{base_url}/chat/completions`.
class RemoteBackend final : public ChatBackend {
public:
    explicit RemoteBackend(RemoteConfig config, LogSink log = {});

    std::string describe() const override;

    /// HTTP attempts issued over the backend's lifetime.
    std::size_t attempts() const noexcept { return attempts_.load(); }

protected:
    std::string complete(const std::vector<ChatMessage>& messages, const GenerationParams& params) override;

private:
    void log(const std::string& line) const;

    RemoteConfig config_;
    LogSink log_;
    std::atomic<std::size_t> attempts_{0};
    std::mutex rng_mu_;
    std::mt19937_64 rng_;
};

/// Request body sent for one chat call.
nlohmann::json chat_request_body(const std::string& model, const std::vector<ChatMessage>& messages,
                                 const GenerationParams& params);

/// Extracts `choices[0].message.content`; throws `ChatProtocolError`.
std::string parse_chat_response(const std::string& body);

} // namespace ragloop::llm
