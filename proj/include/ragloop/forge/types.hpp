#pragma once

#include "ragloop/agent/step.hpp"
#include "ragloop/corpus/passage.hpp"
#include "ragloop/llm/chat.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ragloop::forge {

inline constexpr std::size_t kMaxSupporting = 5;

/// A main passage and the linked passages a question may combine with it.
struct PassagePair {
    corpus::Passage main;
    std::vector<corpus::Passage> supporting; ///< at most kMaxSupporting, main excluded

    /// Main first, then supporting, as shown to the evidence extractor.
    std::vector<corpus::Passage> sources() const;
    friend bool operator==(const PassagePair&, const PassagePair&) = default;
};

enum class HopMode { single_hop, multi_hop };
std::string_view to_string(HopMode m);
HopMode parse_hop_mode(std::string_view name);

struct GeneratedQuestion {
    std::string question;
    std::string reference_answer;
    HopMode mode{HopMode::single_hop};
    PassagePair pair;
    friend bool operator==(const GeneratedQuestion&, const GeneratedQuestion&) = default;
};

enum class FailureKind { parse, backend, max_steps, no_terminal, no_search };
std::string_view to_string(FailureKind k);
FailureKind parse_failure_kind(std::string_view name);

struct AnnotationFailure {
    FailureKind kind{FailureKind::parse};
    std::string message;
    friend bool operator==(const AnnotationFailure&, const AnnotationFailure&) = default;
};

/// A teacher trajectory: search steps with evidence, then the terminal step.
struct SolutionAnnotation {
    GeneratedQuestion question;
    /// Every planner step in order; a successful annotation ends with its final step.
    std::vector<agent::AgentStep> steps;
    std::string final_answer;
    bool terminal_thought_present{false};
    std::optional<int> verification_score;
    std::optional<AnnotationFailure> failure;

    bool ok() const noexcept { return !failure; }
    bool kept() const noexcept { return ok() && verification_score && *verification_score >= 4; }
    std::vector<std::string> thoughts() const;
    std::vector<std::string> queries() const;
    std::vector<std::string> evidence() const;
    std::size_t search_count() const;
    /// |queries| = |evidence| = |thoughts| - 1 and the last step is terminal.
    bool well_formed() const;

    friend bool operator==(const SolutionAnnotation&, const SolutionAnnotation&) = default;
};

enum class RecordKind { planner, final_answer, reflector };
std::string_view to_string(RecordKind k);
RecordKind parse_record_kind(std::string_view name);

struct TrainingRecord {
    RecordKind kind{RecordKind::planner};
    std::vector<llm::ChatMessage> turns;
    /// One flag per turn; true marks loss-bearing (assistant) turns.
    std::vector<bool> response_mask;
    friend bool operator==(const TrainingRecord&, const TrainingRecord&) = default;
};

inline constexpr std::string_view kAnnotationSchema = "ragloop.annotation/1";
inline constexpr std::string_view kRecordSchema = "ragloop.record/1";

nlohmann::json to_json(const PassagePair& pair);
PassagePair pair_from_json(const nlohmann::json& j);
nlohmann::json to_json(const GeneratedQuestion& q);
GeneratedQuestion question_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SolutionAnnotation& a);
SolutionAnnotation annotation_from_json(const nlohmann::json& j);
nlohmann::json to_json(const TrainingRecord& r);
TrainingRecord record_from_json(const nlohmann::json& j);

std::vector<SolutionAnnotation> load_annotations(const std::filesystem::path& path);
void save_annotations(const std::filesystem::path& path, const std::vector<SolutionAnnotation>& annotations);
void save_records(const std::filesystem::path& path, const std::vector<TrainingRecord>& records);
std::vector<TrainingRecord> load_records(const std::filesystem::path& path);

} // namespace ragloop::forge
