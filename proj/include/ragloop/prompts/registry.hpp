#pragma once

#include "ragloop/error.hpp"

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ragloop::prompts {

enum class TemplateId {
    related_passages,
    gen_multihop,
    gen_singlehop,
    extract_evidence,
    solution,
    extract_short_answer,
    gpt_score,
    train_solve,
    train_extract_evidence,
    train_final_answer,
};

inline constexpr std::array kAllTemplates{
    TemplateId::related_passages,     TemplateId::gen_multihop,   TemplateId::gen_singlehop,
    TemplateId::extract_evidence,     TemplateId::solution,       TemplateId::extract_short_answer,
    TemplateId::gpt_score,            TemplateId::train_solve,    TemplateId::train_extract_evidence,
    TemplateId::train_final_answer,
};

std::string_view to_string(TemplateId id);
std::optional<TemplateId> parse_template_id(std::string_view name);

enum class ShotStyle { zero_shot, few_shot };
std::string_view to_string(ShotStyle style);

using Bindings = std::map<std::string, std::string, std::less<>>;

class PromptError : public Error {
public:
    using Error::Error;
};

class MissingSlot : public PromptError {
public:
    MissingSlot(TemplateId id, std::string slot);
    const std::string& slot() const noexcept { return slot_; }

private:
    std::string slot_;
};

class UnknownTemplate : public PromptError {
public:
    explicit UnknownTemplate(std::string_view name);
};

struct PromptTemplate {
    TemplateId id{};
    std::string body;
    std::set<std::string> required_slots;
    ShotStyle shot_style{ShotStyle::zero_shot};
};

struct TemplateInfo {
    TemplateId id{};
    std::set<std::string> required_slots;
    ShotStyle shot_style{ShotStyle::zero_shot};
};

/// Names of the `{{slot}}` placeholders occurring in `body`.
std::set<std::string> placeholders(std::string_view body);

/// Parses a template file: a `---` front-matter block declaring `id`,
/// `slots` (comma separated) and `shot_style`, followed by the body. Throws
/// `PromptError` when declared slots and body placeholders disagree.
PromptTemplate parse_template_file(std::string_view content, std::string_view origin);

/// Immutable set of exactly one template per id. Rendering is pure.
class PromptRegistry {
public:
    /// Templates compiled into the binary from the project's templates/ directory.
    static const PromptRegistry& builtin();

    /// Builtin templates overridden by every `*.prompt` file in `dir`.
    static PromptRegistry load(const std::filesystem::path& dir);

    const PromptTemplate& get(TemplateId id) const;

    /// Substitutes every placeholder in one pass. Bindings for undeclared
    /// slots are ignored. Throws `MissingSlot` naming the first unbound slot.
    std::string render(TemplateId id, const Bindings& bindings) const;
    std::string render(std::string_view id, const Bindings& bindings) const;

    std::vector<TemplateInfo> list() const;

private:
    PromptRegistry() = default;
    void put(PromptTemplate tpl);
    void check_complete() const;

    std::map<TemplateId, PromptTemplate> templates_;
};

} // namespace ragloop::prompts
