#pragma once

#include "ragloop/agent/agent.hpp"
#include "ragloop/corpus/corpus.hpp"
#include "ragloop/llm/remote.hpp"
#include "ragloop/retrieval/embedder.hpp"

#include <json.hpp>

#include <array>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>

namespace ragloop::cli {

/// Environment lookup; returns nullopt for unset variables.
using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;
EnvLookup process_env();

/// Replaces `${NAME}` with the variable's value. Throws `ConfigError` for an
/// unset variable or an unterminated reference.
std::string interpolate_env(std::string_view value, const EnvLookup& env);

inline constexpr std::string_view kDefaultApiKeyEnv = "RAGLOOP_API_KEY";

enum class BackendKind { scripted, remote };

struct BackendSpec {
    BackendKind kind{BackendKind::scripted};
    std::optional<std::filesystem::path> script;
    std::string base_url;
    std::string model;
    /// Resolved secret; never written to reports.
    std::string api_key;
    std::chrono::milliseconds timeout{std::chrono::seconds(120)};
    int max_retries{5};
    std::size_t max_in_flight{8};
    std::optional<double> temperature;
    std::optional<int> max_tokens;

    nlohmann::json to_json() const;
};

struct EmbedderSpec {
    std::string url;
    std::string model;
    std::string api_key;
    std::size_t batch_size{16};
    std::string query_prefix;
    std::string passage_prefix;
};

struct ForgeSettings {
    std::size_t count{100};
    double multi_hop_ratio{0.4};
    std::size_t min_main_chars{200};
    std::size_t max_steps{6};
    double test_fraction{0.1};
};

struct AppConfig {
    std::optional<std::filesystem::path> corpus;
    corpus::CorpusFormat corpus_format{corpus::CorpusFormat::jsonl};
    corpus::IngestMode ingest_mode{corpus::IngestMode::strict};
    std::optional<std::filesystem::path> index;
    /// The `[backend]` section, used by every role without its own section.
    std::optional<BackendSpec> backend;
    /// `[backend.<role>]` sections keyed by role.
    std::map<std::string, BackendSpec> role_backends;
    agent::AgentConfig agent;
    std::optional<EmbedderSpec> embedder;
    std::optional<std::filesystem::path> prompts_dir;
    std::size_t workers{4};
    std::uint64_t seed{0};
    std::size_t judge_retries{2};
    ForgeSettings forge;

    /// Echo for reports: every setting except secrets.
    nlohmann::json to_json() const;
};

/// Roles that may carry their own `[backend.<role>]` section.
inline constexpr std::array<std::string_view, 8> kBackendRoles{
    "planner", "reflector", "answerer", "judge", "extractor", "selector", "generator", "annotator"};

/// Parses INI text. Relative paths resolve against `base_dir`. Throws
/// `ConfigError` on unknown sections or keys and on malformed values.
AppConfig parse_config(const std::string& ini, const std::filesystem::path& base_dir, const EnvLookup& env);
AppConfig load_config(const std::filesystem::path& path, const EnvLookup& env = process_env());

/// Builds one backend instance per distinct section, so roles without their
/// own section share the `[backend]` instance (and a script's call order).
class BackendPool {
public:
    BackendPool(const AppConfig& config, llm::LogSink log = {});
    /// Throws `ConfigError` when neither a role section nor `[backend]` exists.
    llm::BackendPtr get(std::string_view role);
    /// True when `role` resolves to its own section or the default one.
    bool configured(std::string_view role) const;

private:
    const BackendSpec* spec_for(std::string_view role, std::string* key) const;

    const AppConfig& config_;
    llm::LogSink log_;
    std::map<std::string, llm::BackendPtr> instances_;
};

llm::BackendPtr make_backend(const BackendSpec& spec, const std::string& name, llm::LogSink log = {});

/// Generation parameters for `role` after applying its backend's overrides.
llm::GenerationParams role_params(const AppConfig& config, std::string_view role, llm::GenerationParams base);

} // namespace ragloop::cli
