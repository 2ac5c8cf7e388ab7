#include "ragloop/forge/types.hpp"

#include "ragloop/agent/trace_io.hpp"
#include "ragloop/error.hpp"
#include "ragloop/text/tokenizer.hpp"

#include <fstream>
#include <stdexcept>

namespace ragloop::forge {

using nlohmann::json;

namespace {

json passage_json(const corpus::Passage& p) {
    return {{"id", p.id}, {"title", p.title}, {"text", p.text}, {"links", p.links}};
}

corpus::Passage passage_from(const json& j) {
    corpus::Passage p;
    p.id = j.at("id").get<std::string>();
    p.title = j.value("title", "");
    p.text = j.at("text").get<std::string>();
    p.links = j.value("links", std::vector<std::string>{});
    return p;
}

void check_schema(const json& j, std::string_view schema) {
    if (j.value("schema", "") != schema)
        throw std::invalid_argument("expected schema '" + std::string(schema) + "'");
}

template <class T, class F>
std::vector<T> load_jsonl(const std::filesystem::path& path, F parse) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<T> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (text::trim(line).empty()) continue;
        try {
            out.push_back(parse(json::parse(line)));
        } catch (const std::exception& e) {
            throw Error(path.string() + ": line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

template <class T>
void save_jsonl(const std::filesystem::path& path, const std::vector<T>& items) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    for (const auto& item : items) out << to_json(item).dump() << '\n';
    if (!out) throw IoError("write failed for " + path.string());
}

} // namespace

std::vector<corpus::Passage> PassagePair::sources() const {
    std::vector<corpus::Passage> out{main};
    out.insert(out.end(), supporting.begin(), supporting.end());
    return out;
}

std::string_view to_string(HopMode m) { return m == HopMode::single_hop ? "single_hop" : "multi_hop"; }

HopMode parse_hop_mode(std::string_view name) {
    if (name == "single_hop") return HopMode::single_hop;
    if (name == "multi_hop") return HopMode::multi_hop;
    throw std::invalid_argument("unknown hop mode '" + std::string(name) + "'");
}

std::string_view to_string(FailureKind k) {
    switch (k) {
    case FailureKind::parse: return "parse";
    case FailureKind::backend: return "backend";
    case FailureKind::max_steps: return "max_steps";
    case FailureKind::no_terminal: return "no_terminal";
    case FailureKind::no_search: return "no_search";
    }
    return "parse";
}

FailureKind parse_failure_kind(std::string_view name) {
    for (auto k : {FailureKind::parse, FailureKind::backend, FailureKind::max_steps, FailureKind::no_terminal,
                   FailureKind::no_search})
        if (to_string(k) == name) return k;
    throw std::invalid_argument("unknown failure kind '" + std::string(name) + "'");
}

std::string_view to_string(RecordKind k) {
    switch (k) {
    case RecordKind::planner: return "planner";
    case RecordKind::final_answer: return "final_answer";
    case RecordKind::reflector: return "reflector";
    }
    return "planner";
}

RecordKind parse_record_kind(std::string_view name) {
    for (auto k : {RecordKind::planner, RecordKind::final_answer, RecordKind::reflector})
        if (to_string(k) == name) return k;
    throw std::invalid_argument("unknown record kind '" + std::string(name) + "'");
}

std::vector<std::string> SolutionAnnotation::thoughts() const {
    std::vector<std::string> out;
    for (const auto& s : steps) out.push_back(s.thought);
    return out;
}

std::vector<std::string> SolutionAnnotation::queries() const {
    std::vector<std::string> out;
    for (const auto& s : steps)
        if (s.is_search()) out.push_back(s.query());
    return out;
}

std::vector<std::string> SolutionAnnotation::evidence() const {
    std::vector<std::string> out;
    for (const auto& s : steps)
        if (s.is_search() && s.evidence) out.push_back(*s.evidence);
    return out;
}

std::size_t SolutionAnnotation::search_count() const { return queries().size(); }

bool SolutionAnnotation::well_formed() const {
    if (steps.empty() || !steps.back().is_final() || !agent::is_terminal_thought(steps.back().thought)) return false;
    for (std::size_t i = 0; i + 1 < steps.size(); ++i)
        if (!steps[i].is_search()) return false;
    const auto n = thoughts().size();
    return queries().size() == n - 1 && evidence().size() == n - 1;
}

json to_json(const PassagePair& pair) {
    json sup = json::array();
    for (const auto& p : pair.supporting) sup.push_back(passage_json(p));
    return {{"main", passage_json(pair.main)}, {"supporting", sup}};
}

PassagePair pair_from_json(const json& j) {
    PassagePair pair;
    pair.main = passage_from(j.at("main"));
    for (const auto& p : j.at("supporting")) pair.supporting.push_back(passage_from(p));
    if (pair.supporting.size() > kMaxSupporting) throw std::invalid_argument("more than 5 supporting passages");
    return pair;
}

json to_json(const GeneratedQuestion& q) {
    return {{"question", q.question},
            {"reference_answer", q.reference_answer},
            {"mode", std::string(to_string(q.mode))},
            {"pair", to_json(q.pair)}};
}

GeneratedQuestion question_from_json(const json& j) {
    return {j.at("question").get<std::string>(), j.at("reference_answer").get<std::string>(),
            parse_hop_mode(j.at("mode").get<std::string>()), pair_from_json(j.at("pair"))};
}

json to_json(const SolutionAnnotation& a) {
    json steps = json::array();
    for (const auto& s : a.steps) steps.push_back(agent::to_json(s));
    json j{{"schema", kAnnotationSchema},
           {"question", to_json(a.question)},
           {"steps", steps},
           {"final_answer", a.final_answer},
           {"terminal_thought_present", a.terminal_thought_present},
           {"verification_score", a.verification_score ? json(*a.verification_score) : json(nullptr)}};
    j["failure"] = a.failure ? json{{"kind", std::string(to_string(a.failure->kind))}, {"message", a.failure->message}}
                             : json(nullptr);
    return j;
}

SolutionAnnotation annotation_from_json(const json& j) {
    check_schema(j, kAnnotationSchema);
    SolutionAnnotation a;
    a.question = question_from_json(j.at("question"));
    for (const auto& s : j.at("steps")) a.steps.push_back(agent::step_from_json(s));
    a.final_answer = j.value("final_answer", "");
    a.terminal_thought_present = j.value("terminal_thought_present", false);
    if (j.contains("verification_score") && !j.at("verification_score").is_null())
        a.verification_score = j.at("verification_score").get<int>();
    if (j.contains("failure") && !j.at("failure").is_null())
        a.failure = AnnotationFailure{parse_failure_kind(j.at("failure").at("kind").get<std::string>()),
                                      j.at("failure").value("message", "")};
    return a;
}

json to_json(const TrainingRecord& r) {
    json turns = json::array();
    for (std::size_t i = 0; i < r.turns.size(); ++i) {
        turns.push_back({{"role", std::string(llm::to_string(r.turns[i].role))},
                         {"content", r.turns[i].content},
                         {"loss", i < r.response_mask.size() && r.response_mask[i]}});
    }
    return {{"schema", kRecordSchema}, {"kind", std::string(to_string(r.kind))}, {"messages", turns}};
}

TrainingRecord record_from_json(const json& j) {
    check_schema(j, kRecordSchema);
    TrainingRecord r;
    r.kind = parse_record_kind(j.at("kind").get<std::string>());
    for (const auto& t : j.at("messages")) {
        r.turns.push_back({llm::parse_role(t.at("role").get<std::string>()), t.at("content").get<std::string>()});
        r.response_mask.push_back(t.at("loss").get<bool>());
    }
    return r;
}

std::vector<SolutionAnnotation> load_annotations(const std::filesystem::path& path) {
    return load_jsonl<SolutionAnnotation>(path, annotation_from_json);
}

void save_annotations(const std::filesystem::path& path, const std::vector<SolutionAnnotation>& annotations) {
    save_jsonl(path, annotations);
}

void save_records(const std::filesystem::path& path, const std::vector<TrainingRecord>& records) {
    save_jsonl(path, records);
}

std::vector<TrainingRecord> load_records(const std::filesystem::path& path) {
    return load_jsonl<TrainingRecord>(path, record_from_json);
}

} // namespace ragloop::forge
