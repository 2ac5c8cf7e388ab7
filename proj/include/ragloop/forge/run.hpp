#pragma once

#include "ragloop/corpus/corpus.hpp"
#include "ragloop/forge/pipeline.hpp"
#include "ragloop/forge/records.hpp"

#include <json.hpp>

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ragloop::forge {

struct ForgeConfig {
    /// Articles to attempt, at most one item each.
    std::size_t target_count{100};
    std::uint64_t seed{0};
    /// Probability that an item with links is generated as multi-hop.
    double multi_hop_ratio{0.4};
    /// Minimum main-passage length in characters.
    std::size_t min_main_chars{200};
    std::size_t parse_retries{1};
    std::size_t judge_retries{2};
    AnnotateOptions annotate;
    llm::GenerationParams generation{default_generation_params()};
    /// Share of articles placed in the test split when no explicit split is given.
    double test_fraction{0.1};
    std::optional<std::vector<std::string>> train_articles;
    std::optional<std::vector<std::string>> test_articles;
    std::size_t workers{4};

    /// Throws `ConfigError` on out-of-range values or an overlapping split.
    void validate() const;
    nlohmann::json to_json() const;
};

struct ForgeBackends {
    llm::BackendPtr selector;
    llm::BackendPtr generator;
    llm::BackendPtr annotator;
    llm::BackendPtr judge;

    static ForgeBackends shared(llm::BackendPtr b) { return {b, b, b, b}; }
    bool order_sensitive() const;
};

enum class Split { train, test };
std::string_view to_string(Split s);

/// Outcome of one item, in input order.
struct ForgeItem {
    std::size_t index{0};
    std::string article_id;
    Split split{Split::train};
    std::optional<SolutionAnnotation> annotation;
    /// Stage that stopped the item: selection, generation, annotation, verification, export.
    std::optional<std::string> failed_stage;
    /// "verification" for a low score, or the failure kind.
    std::optional<std::string> reason;
    std::optional<std::string> message;
    std::vector<std::string> warnings;

    bool kept() const noexcept { return !reason && annotation && annotation->kept(); }
};

struct ForgeReport {
    std::size_t articles_train{0};
    std::size_t articles_test{0};
    std::size_t attempted{0};
    std::size_t generated{0};
    std::size_t annotated{0};
    std::size_t failed{0};
    std::size_t dropped{0};
    std::size_t kept{0};
    std::size_t kept_train{0};
    std::size_t kept_test{0};
    std::size_t records{0};
    std::size_t warnings{0};
    std::map<std::string, std::size_t> reasons;
    std::map<std::string, std::size_t> question_types;
    bool complete{true};
    nlohmann::json config;
    std::string config_fingerprint;

    nlohmann::json to_json() const;
};

inline constexpr std::string_view kForgeReportSchema = "ragloop.forge-report/1";

struct ForgeResult {
    ForgeReport report;
    std::vector<ForgeItem> items;
    std::vector<SolutionAnnotation> train;
    std::vector<SolutionAnnotation> test;
    std::vector<TrainingRecord> records;
};

/// A backend failure that stops the whole run.
class ForgeAborted : public ForgeError {
public:
    using ForgeError::ForgeError;
};

struct ForgeContext {
    const prompts::PromptRegistry* registry{&prompts::PromptRegistry::builtin()};
    const std::atomic<bool>* cancel{nullptr};
    /// Merged into the report config under "run".
    nlohmann::json run_config;
};

/// Samples main passages, selects supporting passages, generates and
/// annotates questions, verifies them and emits training records.
///
/// Articles are corpus passages; `links` name other articles. Supporting
/// candidates come from the same split as the main article. Item failures are
/// recorded; a backend failure throws `ForgeAborted`.
ForgeResult run_forge(const corpus::Corpus& corpus, const ForgeBackends& backends, const ForgeConfig& config,
                      const ForgeContext& context = {});

/// Writes annotations.{train,test}.jsonl, records.train.jsonl,
/// testset.jsonl, testset.passages.jsonl, quarantine.jsonl and report.json.
void write_forge_outputs(const std::filesystem::path& dir, const ForgeResult& result);

/// Paragraphs of `text` (blank-line separated) with at least `min_chars` characters.
std::vector<std::string> main_candidates(const std::string& text, std::size_t min_chars);

} // namespace ragloop::forge
