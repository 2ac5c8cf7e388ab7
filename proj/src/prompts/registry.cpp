#include "ragloop/prompts/registry.hpp"

#include "ragloop/text/tokenizer.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <utility>

namespace ragloop::prompts {

// Generated at configure time from templates/*.prompt.
const std::vector<std::pair<std::string_view, std::string_view>>& builtin_template_sources();

namespace {

constexpr std::array<std::string_view, kAllTemplates.size()> kNames{
    "related_passages", "gen_multihop",        "gen_singlehop", "extract_evidence",
    "solution",         "extract_short_answer", "gpt_score",     "train_solve",
    "train_extract_evidence", "train_final_answer",
};

bool is_slot_name(std::string_view s) {
    if (s.empty() || !(std::islower(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        return std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) || c == '_';
    });
}

/// Calls `on_text` for literal runs and `on_slot` for each placeholder.
template <typename OnText, typename OnSlot>
void scan(std::string_view body, OnText&& on_text, OnSlot&& on_slot) {
    std::size_t pos = 0;
    while (pos < body.size()) {
        const auto open = body.find("{{", pos);
        if (open == std::string_view::npos) break;
        const auto close = body.find("}}", open + 2);
        if (close == std::string_view::npos) break;
        const auto name = text::trim(body.substr(open + 2, close - open - 2));
        if (!is_slot_name(name)) {
            on_text(body.substr(pos, open + 2 - pos));
            pos = open + 2;
            continue;
        }
        on_text(body.substr(pos, open - pos));
        on_slot(name);
        pos = close + 2;
    }
    on_text(body.substr(pos));
}

std::set<std::string> split_slots(std::string_view list) {
    std::set<std::string> out;
    std::stringstream ss{std::string(list)};
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto name = text::trim(item);
        if (name.empty()) continue;
        if (!is_slot_name(name)) throw PromptError("invalid slot name '" + std::string(name) + "'");
        out.emplace(name);
    }
    return out;
}

} // namespace

std::string_view to_string(TemplateId id) { return kNames[static_cast<std::size_t>(id)]; }

std::optional<TemplateId> parse_template_id(std::string_view name) {
    for (std::size_t i = 0; i < kNames.size(); ++i) {
        if (kNames[i] == name) return kAllTemplates[i];
    }
    return std::nullopt;
}

std::string_view to_string(ShotStyle style) { return style == ShotStyle::few_shot ? "few_shot" : "zero_shot"; }

MissingSlot::MissingSlot(TemplateId id, std::string slot)
    : PromptError("template " + std::string(to_string(id)) + ": missing binding for slot '" + slot + "'"),
      slot_(std::move(slot)) {}

UnknownTemplate::UnknownTemplate(std::string_view name)
    : PromptError("unknown template id '" + std::string(name) + "'") {}

std::set<std::string> placeholders(std::string_view body) {
    std::set<std::string> out;
    scan(body, [](std::string_view) {}, [&](std::string_view name) { out.emplace(name); });
    return out;
}

PromptTemplate parse_template_file(std::string_view content, std::string_view origin) {
    auto fail = [&](const std::string& msg) { return PromptError(std::string(origin) + ": " + msg); };

    std::istringstream in{std::string(content)};
    std::string line;
    if (!std::getline(in, line) || text::trim(line) != "---") throw fail("missing front-matter header");

    std::map<std::string, std::string, std::less<>> fields;
    bool closed = false;
    while (std::getline(in, line)) {
        if (text::trim(line) == "---") {
            closed = true;
            break;
        }
        const auto colon = line.find(':');
        if (colon == std::string::npos) throw fail("malformed front-matter line '" + line + "'");
        fields[std::string(text::trim(std::string_view(line).substr(0, colon)))] =
            std::string(text::trim(std::string_view(line).substr(colon + 1)));
    }
    if (!closed) throw fail("unterminated front-matter block");

    std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    while (!body.empty() && std::isspace(static_cast<unsigned char>(body.back()))) body.pop_back();

    PromptTemplate tpl;
    const auto id_it = fields.find("id");
    if (id_it == fields.end()) throw fail("front matter lacks 'id'");
    const auto id = parse_template_id(id_it->second);
    if (!id) throw fail("unknown template id '" + id_it->second + "'");
    tpl.id = *id;

    const auto style = fields.find("shot_style");
    if (style == fields.end() || (style->second != "zero_shot" && style->second != "few_shot"))
        throw fail("shot_style must be zero_shot or few_shot");
    tpl.shot_style = style->second == "few_shot" ? ShotStyle::few_shot : ShotStyle::zero_shot;

    const auto slots = fields.find("slots");
    if (slots == fields.end()) throw fail("front matter lacks 'slots'");
    tpl.required_slots = split_slots(slots->second);
    tpl.body = std::move(body);

    const auto used = placeholders(tpl.body);
    for (const auto& s : used) {
        if (!tpl.required_slots.contains(s)) throw fail("placeholder '" + s + "' is not declared in slots");
    }
    for (const auto& s : tpl.required_slots) {
        if (!used.contains(s)) throw fail("declared slot '" + s + "' never appears in the body");
    }
    return tpl;
}

void PromptRegistry::put(PromptTemplate tpl) { templates_[tpl.id] = std::move(tpl); }

void PromptRegistry::check_complete() const {
    for (auto id : kAllTemplates) {
        if (!templates_.contains(id)) throw PromptError("no template registered for " + std::string(to_string(id)));
    }
}

const PromptRegistry& PromptRegistry::builtin() {
    static const PromptRegistry registry = [] {
        PromptRegistry r;
        for (const auto& [name, source] : builtin_template_sources()) {
            auto tpl = parse_template_file(source, name);
            if (r.templates_.contains(tpl.id))
                throw PromptError("duplicate builtin template " + std::string(to_string(tpl.id)));
            r.put(std::move(tpl));
        }
        r.check_complete();
        return r;
    }();
    return registry;
}

PromptRegistry PromptRegistry::load(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw IoError("template directory not found: " + dir.string());
    PromptRegistry r = builtin();

    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".prompt") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    std::set<TemplateId> seen;
    for (const auto& path : files) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot read template file: " + path.string());
        std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        auto tpl = parse_template_file(content, path.string());
        if (!seen.insert(tpl.id).second)
            throw PromptError("template " + std::string(to_string(tpl.id)) + " defined twice in " + dir.string());
        r.put(std::move(tpl));
    }
    r.check_complete();
    return r;
}

const PromptTemplate& PromptRegistry::get(TemplateId id) const {
    auto it = templates_.find(id);
    if (it == templates_.end()) throw UnknownTemplate(to_string(id));
    return it->second;
}

std::string PromptRegistry::render(TemplateId id, const Bindings& bindings) const {
    const auto& tpl = get(id);
    for (const auto& slot : tpl.required_slots) {
        if (!bindings.contains(slot)) throw MissingSlot(id, slot);
    }
    std::string out;
    out.reserve(tpl.body.size());
    scan(
        tpl.body, [&](std::string_view literal) { out.append(literal); },
        [&](std::string_view name) { out.append(bindings.find(name)->second); });
    return out;
}

std::string PromptRegistry::render(std::string_view id, const Bindings& bindings) const {
    const auto parsed = parse_template_id(id);
    if (!parsed) throw UnknownTemplate(id);
    return render(*parsed, bindings);
}

std::vector<TemplateInfo> PromptRegistry::list() const {
    std::vector<TemplateInfo> out;
    for (const auto& [id, tpl] : templates_) out.push_back({id, tpl.required_slots, tpl.shot_style});
    return out;
}

} // namespace ragloop::prompts
