#include "ragloop/cli/config.hpp"

#include "ragloop/llm/scripted.hpp"
#include "ragloop/text/tokenizer.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace ragloop::cli {

using nlohmann::json;
namespace pt = boost::property_tree;

namespace {

struct Section {
    std::string name;
    const pt::ptree& tree;
    const EnvLookup& env;

    std::optional<std::string> raw(const char* key) const {
        auto it = tree.find(key);
        if (it == tree.not_found()) return std::nullopt;
        return interpolate_env(text::trim(it->second.data()), env);
    }

    std::optional<std::string> str(const char* key) const { return raw(key); }

    template <class T>
    std::optional<T> number(const char* key) const {
        auto v = raw(key);
        if (!v) return std::nullopt;
        try {
            std::size_t used = 0;
            T out;
            if constexpr (std::is_floating_point_v<T>) {
                out = static_cast<T>(std::stod(*v, &used));
            } else {
                if (!v->empty() && v->front() == '-') throw std::invalid_argument("negative");
                out = static_cast<T>(std::stoull(*v, &used));
            }
            if (used != v->size()) throw std::invalid_argument("trailing characters");
            return out;
        } catch (const std::exception&) {
            throw ConfigError("[" + name + "] " + key + ": '" + *v + "' is not a valid number");
        }
    }

    std::optional<bool> flag(const char* key) const {
        auto v = raw(key);
        if (!v) return std::nullopt;
        const auto l = text::to_lower(*v);
        if (l == "true" || l == "yes" || l == "on" || l == "1") return true;
        if (l == "false" || l == "no" || l == "off" || l == "0") return false;
        throw ConfigError("[" + name + "] " + key + ": '" + *v + "' is not a boolean");
    }

    void allow(std::initializer_list<std::string_view> keys) const {
        for (const auto& [k, _] : tree) {
            bool known = false;
            for (auto allowed : keys) known = known || k == allowed;
            if (!known) throw ConfigError("unknown key '" + k + "' in [" + name + "]");
        }
    }
};

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() || base.empty() ? path : base / path;
}

BackendSpec parse_backend(const Section& s, const std::filesystem::path& base) {
    s.allow({"kind", "script", "base_url", "model", "api_key", "api_key_env", "timeout_s", "max_retries",
             "max_in_flight", "temperature", "max_tokens"});
    BackendSpec spec;
    const auto kind = s.str("kind").value_or(s.str("script") ? "scripted" : "remote");
    if (kind == "scripted") {
        spec.kind = BackendKind::scripted;
        auto script = s.str("script");
        if (!script) throw ConfigError("[" + s.name + "] a scripted backend needs 'script'");
        spec.script = resolve(base, *script);
    } else if (kind == "remote") {
        spec.kind = BackendKind::remote;
        spec.base_url = s.str("base_url").value_or("");
        if (spec.base_url.empty()) throw ConfigError("[" + s.name + "] a remote backend needs 'base_url'");
        spec.model = s.str("model").value_or("");
        if (auto key = s.str("api_key")) {
            spec.api_key = *key;
        } else {
            const auto var = s.str("api_key_env").value_or(std::string(kDefaultApiKeyEnv));
            spec.api_key = s.env(var).value_or("");
        }
    } else {
        throw ConfigError("[" + s.name + "] unknown backend kind '" + kind + "'");
    }
    if (auto t = s.number<double>("timeout_s")) {
        if (*t <= 0) throw ConfigError("[" + s.name + "] timeout_s must be positive");
        spec.timeout = std::chrono::milliseconds(static_cast<long long>(*t * 1000));
    }
    if (auto r = s.number<int>("max_retries")) spec.max_retries = *r;
    if (auto m = s.number<std::size_t>("max_in_flight")) {
        if (*m == 0) throw ConfigError("[" + s.name + "] max_in_flight must be at least 1");
        spec.max_in_flight = *m;
    }
    spec.temperature = s.number<double>("temperature");
    spec.max_tokens = s.number<int>("max_tokens");
    return spec;
}

} // namespace

EnvLookup process_env() {
    return [](const std::string& name) -> std::optional<std::string> {
        if (const char* v = std::getenv(name.c_str())) return std::string(v);
        return std::nullopt;
    };
}

std::string interpolate_env(std::string_view value, const EnvLookup& env) {
    std::string out;
    std::size_t i = 0;
    while (i < value.size()) {
        if (value[i] == '$' && i + 1 < value.size() && value[i + 1] == '{') {
            const auto close = value.find('}', i + 2);
            if (close == std::string_view::npos)
                throw ConfigError("unterminated ${...} in '" + std::string(value) + "'");
            const std::string name(value.substr(i + 2, close - i - 2));
            const auto v = env(name);
            if (!v) throw ConfigError("environment variable '" + name + "' is not set");
            out += *v;
            i = close + 1;
        } else {
            out.push_back(value[i++]);
        }
    }
    return out;
}

json BackendSpec::to_json() const {
    json j{{"kind", kind == BackendKind::scripted ? "scripted" : "remote"}};
    if (script) j["script"] = script->string();
    if (kind == BackendKind::remote) {
        j["base_url"] = base_url;
        j["model"] = model;
        j["api_key_set"] = !api_key.empty();
        j["timeout_s"] = static_cast<double>(timeout.count()) / 1000.0;
        j["max_retries"] = max_retries;
        j["max_in_flight"] = max_in_flight;
    }
    if (temperature) j["temperature"] = *temperature;
    if (max_tokens) j["max_tokens"] = *max_tokens;
    return j;
}

json AppConfig::to_json() const {
    json j;
    j["corpus"] = corpus ? json(corpus->string()) : json(nullptr);
    j["corpus_format"] = corpus_format == corpus::CorpusFormat::jsonl ? "jsonl" : "tsv";
    j["ingest_mode"] = std::string(corpus::to_string(ingest_mode));
    j["index"] = index ? json(index->string()) : json(nullptr);
    j["backend"] = backend ? backend->to_json() : json(nullptr);
    json roles = json::object();
    for (const auto& [role, spec] : role_backends) roles[role] = spec.to_json();
    j["role_backends"] = roles;
    j["agent"] = {{"budget_k", agent.budget_k ? json(*agent.budget_k) : json(nullptr)},
                  {"top_k", agent.top_k},
                  {"use_reranker", agent.use_reranker},
                  {"safety_cap", agent.safety_cap}};
    j["embedder"] = embedder ? json{{"url", embedder->url}, {"model", embedder->model}} : json(nullptr);
    j["prompts_dir"] = prompts_dir ? json(prompts_dir->string()) : json(nullptr);
    j["workers"] = workers;
    j["seed"] = seed;
    return j;
}

AppConfig parse_config(const std::string& ini, const std::filesystem::path& base_dir, const EnvLookup& env) {
    pt::ptree tree;
    try {
        std::istringstream in(ini);
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    AppConfig cfg;
    for (const auto& [name, child] : tree) {
        if (child.empty() && !child.data().empty())
            throw ConfigError("config key '" + name + "' must be inside a section");
        const Section s{name, child, env};
        if (name == "corpus") {
            s.allow({"path", "format", "mode"});
            if (auto p = s.str("path")) cfg.corpus = resolve(base_dir, *p);
            if (auto f = s.str("format")) {
                try {
                    cfg.corpus_format = corpus::parse_corpus_format(*f);
                } catch (const std::exception& e) {
                    throw ConfigError(std::string("[corpus] format: ") + e.what());
                }
            }
            if (auto m = s.str("mode")) {
                if (*m == "strict") cfg.ingest_mode = corpus::IngestMode::strict;
                else if (*m == "lenient") cfg.ingest_mode = corpus::IngestMode::lenient;
                else throw ConfigError("[corpus] mode must be strict or lenient");
            }
        } else if (name == "index") {
            s.allow({"path"});
            if (auto p = s.str("path")) cfg.index = resolve(base_dir, *p);
        } else if (name == "backend") {
            cfg.backend = parse_backend(s, base_dir);
        } else if (name.rfind("backend.", 0) == 0) {
            const auto role = name.substr(8);
            bool known = false;
            for (auto r : kBackendRoles) known = known || r == role;
            if (!known) throw ConfigError("unknown backend role '" + role + "'");
            cfg.role_backends[role] = parse_backend(s, base_dir);
        } else if (name == "agent") {
            s.allow({"budget_k", "top_k", "use_reranker", "safety_cap", "parse_retries", "evidence_char_limit"});
            if (auto b = s.str("budget_k")) {
                const auto l = text::to_lower(*b);
                if (l == "none" || l == "unlimited" || l == "no limit") cfg.agent.budget_k.reset();
                else cfg.agent.budget_k = s.number<std::size_t>("budget_k");
            }
            if (auto v = s.number<std::size_t>("top_k")) cfg.agent.top_k = *v;
            if (auto v = s.flag("use_reranker")) cfg.agent.use_reranker = *v;
            if (auto v = s.number<std::size_t>("safety_cap")) cfg.agent.safety_cap = *v;
            if (auto v = s.number<std::size_t>("parse_retries")) cfg.agent.max_planner_parse_retries = *v;
            if (auto v = s.number<std::size_t>("evidence_char_limit")) cfg.agent.evidence_char_limit = *v;
        } else if (name == "embedder") {
            s.allow({"url", "model", "api_key", "api_key_env", "batch_size", "query_prefix", "passage_prefix"});
            EmbedderSpec e;
            e.url = s.str("url").value_or("");
            if (e.url.empty()) throw ConfigError("[embedder] needs 'url'");
            e.model = s.str("model").value_or("");
            if (auto key = s.str("api_key")) e.api_key = *key;
            else e.api_key = env(s.str("api_key_env").value_or(std::string(kDefaultApiKeyEnv))).value_or("");
            if (auto b = s.number<std::size_t>("batch_size")) e.batch_size = *b;
            e.query_prefix = s.str("query_prefix").value_or("");
            e.passage_prefix = s.str("passage_prefix").value_or("");
            cfg.embedder = std::move(e);
        } else if (name == "prompts") {
            s.allow({"dir"});
            if (auto d = s.str("dir")) cfg.prompts_dir = resolve(base_dir, *d);
        } else if (name == "run") {
            s.allow({"workers", "seed", "judge_retries"});
            if (auto v = s.number<std::size_t>("workers")) cfg.workers = *v;
            if (auto v = s.number<std::uint64_t>("seed")) cfg.seed = *v;
            if (auto v = s.number<std::size_t>("judge_retries")) cfg.judge_retries = *v;
        } else if (name == "forge") {
            s.allow({"count", "multi_hop_ratio", "min_main_chars", "max_steps", "test_fraction"});
            if (auto v = s.number<std::size_t>("count")) cfg.forge.count = *v;
            if (auto v = s.number<double>("multi_hop_ratio")) cfg.forge.multi_hop_ratio = *v;
            if (auto v = s.number<std::size_t>("min_main_chars")) cfg.forge.min_main_chars = *v;
            if (auto v = s.number<std::size_t>("max_steps")) cfg.forge.max_steps = *v;
            if (auto v = s.number<double>("test_fraction")) cfg.forge.test_fraction = *v;
        } else {
            throw ConfigError("unknown config section [" + name + "]");
        }
    }
    if (cfg.workers == 0) throw ConfigError("[run] workers must be at least 1");
    cfg.agent.validate();
    return cfg;
}

AppConfig load_config(const std::filesystem::path& path, const EnvLookup& env) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.parent_path(), env);
}

llm::BackendPtr make_backend(const BackendSpec& spec, const std::string& name, llm::LogSink log) {
    if (spec.kind == BackendKind::scripted) {
        if (!spec.script || !std::filesystem::exists(*spec.script))
            throw ConfigError("script file not found: " + (spec.script ? spec.script->string() : std::string("?")));
        return llm::make_scripted(llm::load_script(*spec.script), name);
    }
    llm::RemoteConfig rc;
    rc.base_url = spec.base_url;
    rc.model = spec.model;
    rc.api_key = spec.api_key;
    rc.timeout = spec.timeout;
    rc.retry.max_retries = spec.max_retries;
    rc.max_in_flight = spec.max_in_flight;
    return std::make_shared<llm::RemoteBackend>(std::move(rc), std::move(log));
}

BackendPool::BackendPool(const AppConfig& config, llm::LogSink log) : config_(config), log_(std::move(log)) {}

const BackendSpec* BackendPool::spec_for(std::string_view role, std::string* key) const {
    auto it = config_.role_backends.find(std::string(role));
    if (it != config_.role_backends.end()) {
        if (key) *key = "backend." + it->first;
        return &it->second;
    }
    if (config_.backend) {
        if (key) *key = "backend";
        return &*config_.backend;
    }
    return nullptr;
}

bool BackendPool::configured(std::string_view role) const { return spec_for(role, nullptr) != nullptr; }

llm::BackendPtr BackendPool::get(std::string_view role) {
    std::string key;
    const auto* spec = spec_for(role, &key);
    if (!spec) throw ConfigError("no backend configured for role '" + std::string(role) + "'");
    auto& slot = instances_[key];
    if (!slot) slot = make_backend(*spec, key, log_);
    return slot;
}

llm::GenerationParams role_params(const AppConfig& config, std::string_view role, llm::GenerationParams base) {
    const BackendSpec* spec = nullptr;
    if (auto it = config.role_backends.find(std::string(role)); it != config.role_backends.end()) spec = &it->second;
    else if (config.backend) spec = &*config.backend;
    if (spec) {
        if (spec->temperature) base.temperature = *spec->temperature;
        if (spec->max_tokens) base.max_tokens = *spec->max_tokens;
    }
    return base;
}

} // namespace ragloop::cli
