#include "ragloop/eval/dataset.hpp"

#include "ragloop/text/tokenizer.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <stdexcept>

namespace ragloop::eval {

namespace {

std::string id_of(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    throw std::invalid_argument("id must be a string or integer");
}

} // namespace

QAExample example_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("record is not a JSON object");
    QAExample ex;
    if (!j.contains("id")) throw std::invalid_argument("missing id");
    ex.id = id_of(j.at("id"));
    if (ex.id.empty()) throw std::invalid_argument("empty id");
    if (!j.contains("question") || !j.at("question").is_string())
        throw std::invalid_argument("missing string field 'question'");
    ex.question = j.at("question").get<std::string>();
    if (text::trim(ex.question).empty()) throw std::invalid_argument("empty question");

    if (j.contains("answers")) {
        const auto& a = j.at("answers");
        if (!a.is_array()) throw std::invalid_argument("'answers' must be a list");
        for (const auto& v : a) {
            if (!v.is_string()) throw std::invalid_argument("'answers' entries must be strings");
            ex.gold_answers.push_back(v.get<std::string>());
        }
    } else if (j.contains("answer")) {
        if (!j.at("answer").is_string()) throw std::invalid_argument("'answer' must be a string");
        ex.gold_answers.push_back(j.at("answer").get<std::string>());
    }
    if (ex.gold_answers.empty()) throw std::invalid_argument("no gold answers");

    if (j.contains("gold_passages") && !j.at("gold_passages").is_null()) {
        const auto& g = j.at("gold_passages");
        if (!g.is_array()) throw std::invalid_argument("'gold_passages' must be a list");
        std::vector<std::string> ids;
        for (const auto& v : g) ids.push_back(id_of(v));
        ex.gold_passages = std::move(ids);
    }
    return ex;
}

nlohmann::json to_json(const QAExample& example) {
    nlohmann::json j{{"id", example.id}, {"question", example.question}, {"answers", example.gold_answers}};
    if (example.gold_passages) j["gold_passages"] = *example.gold_passages;
    return j;
}

std::vector<QAExample> load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dataset " + path.string());
    std::vector<QAExample> out;
    std::set<std::string> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (text::trim(line).empty()) continue;
        QAExample ex;
        try {
            ex = example_from_json(nlohmann::json::parse(line));
        } catch (const nlohmann::json::exception& e) {
            throw DatasetError(lineno, e.what());
        } catch (const std::invalid_argument& e) {
            throw DatasetError(lineno, e.what());
        }
        if (!seen.insert(ex.id).second) throw DatasetError(lineno, "duplicate id '" + ex.id + "'");
        out.push_back(std::move(ex));
    }
    return out;
}

void save_dataset(const std::filesystem::path& path, const std::vector<QAExample>& examples) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    for (const auto& ex : examples) out << to_json(ex).dump() << '\n';
    if (!out) throw IoError("write failed for " + path.string());
}

std::vector<QAExample> select_examples(std::vector<QAExample> examples, std::size_t limit) {
    std::stable_sort(examples.begin(), examples.end(),
                     [](const QAExample& a, const QAExample& b) { return a.id < b.id; });
    if (examples.size() > limit) examples.resize(limit);
    return examples;
}

} // namespace ragloop::eval
