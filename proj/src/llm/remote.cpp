#include "ragloop/llm/remote.hpp"

#include "ragloop/net/http.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace ragloop::llm {

using nlohmann::json;

std::chrono::milliseconds RetryPolicy::delay(int retry, double unit_draw) const {
    const double raw = static_cast<double>(base_delay.count()) * std::pow(2.0, retry);
    double capped = std::min(raw, static_cast<double>(max_delay.count()));
    if (jitter) capped *= 0.5 + 0.5 * std::clamp(unit_draw, 0.0, 1.0);
    return std::chrono::milliseconds(static_cast<long long>(capped));
}

json chat_request_body(const std::string& model, const std::vector<ChatMessage>& messages,
                       const GenerationParams& params) {
    json body{{"model", model},
              {"messages", to_json(messages)},
              {"temperature", params.temperature},
              {"max_tokens", params.max_tokens}};
    if (!params.stop.empty()) body["stop"] = params.stop;
    return body;
}

std::string parse_chat_response(const std::string& body) {
    try {
        const auto j = json::parse(body);
        const auto& content = j.at("choices").at(0).at("message").at("content");
        if (!content.is_string()) throw ChatProtocolError("completion content is not a string");
        return content.get<std::string>();
    } catch (const json::exception& e) {
        throw ChatProtocolError(std::string("malformed chat completion: ") + e.what());
    }
}

RemoteBackend::RemoteBackend(RemoteConfig config, LogSink log)
    : ChatBackend(config.max_in_flight), config_(std::move(config)), log_(std::move(log)),
      rng_(std::random_device{}()) {
    if (config_.retry.max_retries < 0) throw ConfigError("max_retries must be non-negative");
    net::parse_url(config_.base_url);
}

std::string RemoteBackend::describe() const {
    return "remote (model=" + config_.model + ", base_url=" + config_.base_url + ")";
}

void RemoteBackend::log(const std::string& line) const {
    if (log_) log_(redact(line, config_.api_key));
}

std::string RemoteBackend::complete(const std::vector<ChatMessage>& messages, const GenerationParams& params) {
    const auto endpoint = net::parse_url(config_.base_url);
    const std::string body = chat_request_body(config_.model, messages, params).dump();
    const net::HttpOptions options{config_.timeout, config_.api_key};

    for (int attempt = 0;; ++attempt) {
        ++attempts_;
        std::string failure;
        bool retryable = false;
        int status = 0;
        try {
            const auto res = net::post_json(endpoint, "/chat/completions", body, options);
            status = res.status;
            if (res.status >= 200 && res.status < 300) return parse_chat_response(res.body);
            retryable = res.status == 429 || res.status >= 500;
            failure = "HTTP " + std::to_string(res.status) + ": " + res.body.substr(0, 300);
        } catch (const net::TransportError& e) {
            retryable = true;
            failure = e.what();
        }

        failure = redact(std::move(failure), config_.api_key);
        if (!retryable || attempt >= config_.retry.max_retries) {
            log("chat request failed after " + std::to_string(attempt + 1) + " attempt(s): " + failure);
            if (status != 0) throw ChatHttpError(status, "chat completion failed: " + failure);
            throw ChatTransportError("chat completion failed: " + failure);
        }

        double draw;
        {
            std::lock_guard lock(rng_mu_);
            draw = std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
        }
        const auto wait = config_.retry.delay(attempt, draw);
        log("attempt " + std::to_string(attempt + 1) + " failed (" + failure + "); retrying in " +
            std::to_string(wait.count()) + "ms");
        std::this_thread::sleep_for(wait);
    }
}

} // namespace ragloop::llm
