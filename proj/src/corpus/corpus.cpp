#include "ragloop/corpus/corpus.hpp"

#include <json.hpp>

#include <fstream>
#include <stdexcept>

namespace ragloop::corpus {

using nlohmann::json;

std::string Passage::indexed_text() const {
    if (title.empty()) return text;
    return title + " " + text;
}

CorpusFormat parse_corpus_format(std::string_view name) {
    if (name == "jsonl") return CorpusFormat::jsonl;
    if (name == "tsv") return CorpusFormat::tsv;
    throw ConfigError("unknown corpus format '" + std::string(name) + "' (expected jsonl or tsv)");
}

std::string_view to_string(IngestMode mode) {
    return mode == IngestMode::strict ? "strict" : "lenient";
}

CorpusFormatError::CorpusFormatError(std::size_t line, const std::string& message)
    : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

PassageNotFound::PassageNotFound(const std::string& id) : Error("passage not found: " + id) {}

Corpus::Corpus(text::TokenizerConfig tokenizer) : tokenizer_(std::move(tokenizer)) {}

bool Corpus::add(Passage passage, bool replace) {
    if (passage.id.empty()) throw std::invalid_argument("passage id is empty");
    if (text::trim(passage.text).empty())
        throw std::invalid_argument("passage '" + passage.id + "' has empty text");

    const auto tokens = text::count_tokens(passage.indexed_text(), tokenizer_);
    if (auto it = by_id_.find(passage.id); it != by_id_.end()) {
        if (!replace) throw std::invalid_argument("duplicate passage id '" + passage.id + "'");
        total_tokens_ -= token_counts_[it->second];
        total_tokens_ += tokens;
        token_counts_[it->second] = tokens;
        passages_[it->second] = std::move(passage);
        return true;
    }
    by_id_.emplace(passage.id, passages_.size());
    passages_.push_back(std::move(passage));
    token_counts_.push_back(tokens);
    total_tokens_ += tokens;
    return false;
}

const Passage* Corpus::find(std::string_view id) const {
    auto it = by_id_.find(std::string(id));
    return it == by_id_.end() ? nullptr : &passages_[it->second];
}

const Passage& Corpus::at(std::string_view id) const {
    if (const auto* p = find(id)) return *p;
    throw PassageNotFound(std::string(id));
}

CorpusStats Corpus::stats() const {
    CorpusStats s;
    s.doc_count = passages_.size();
    s.total_tokens = total_tokens_;
    s.avg_doc_len = s.doc_count == 0 ? 0.0
                                     : static_cast<double>(s.total_tokens) /
                                           static_cast<double>(s.doc_count);
    return s;
}

CorpusStats Corpus::recompute_stats() const {
    CorpusStats s;
    s.doc_count = passages_.size();
    for (const auto& p : passages_) s.total_tokens += text::count_tokens(p.indexed_text(), tokenizer_);
    s.avg_doc_len = s.doc_count == 0 ? 0.0
                                     : static_cast<double>(s.total_tokens) /
                                           static_cast<double>(s.doc_count);
    return s;
}

Passage parse_passage_json(std::string_view line) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("record is not a JSON object");

    auto required_string = [&](const char* key) {
        auto it = j.find(key);
        if (it == j.end()) throw std::invalid_argument(std::string("missing \"") + key + "\"");
        if (!it->is_string()) throw std::invalid_argument(std::string("\"") + key + "\" is not a string");
        return it->get<std::string>();
    };

    Passage p;
    p.id = required_string("id");
    p.text = required_string("text");
    if (auto it = j.find("title"); it != j.end() && !it->is_null()) {
        if (!it->is_string()) throw std::invalid_argument("\"title\" is not a string");
        p.title = it->get<std::string>();
    }
    if (auto it = j.find("links"); it != j.end() && !it->is_null()) {
        if (!it->is_array()) throw std::invalid_argument("\"links\" is not an array");
        for (const auto& l : *it) {
            if (!l.is_string()) throw std::invalid_argument("\"links\" holds a non-string entry");
            p.links.push_back(l.get<std::string>());
        }
    }
    return p;
}

std::string passage_to_json(const Passage& passage) {
    json j{{"id", passage.id}, {"title", passage.title}, {"text", passage.text}};
    if (!passage.links.empty()) j["links"] = passage.links;
    return j.dump();
}

namespace {

Passage parse_tsv(std::string_view line) {
    const auto first = line.find('\t');
    if (first == std::string_view::npos) throw std::invalid_argument("expected 3 tab-separated fields");
    const auto second = line.find('\t', first + 1);
    Passage p;
    p.id = std::string(line.substr(0, first));
    if (second == std::string_view::npos) {
        // id<TAB>text
        p.text = std::string(line.substr(first + 1));
    } else {
        p.title = std::string(line.substr(first + 1, second - first - 1));
        p.text = std::string(line.substr(second + 1));
    }
    return p;
}

} // namespace

IngestReport ingest_into(Corpus& corpus, const std::filesystem::path& path, CorpusFormat format,
                         IngestMode mode) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open corpus file: " + path.string());

    IngestReport report;
    report.mode = mode;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (text::trim(line).empty()) continue;
        try {
            Passage p = format == CorpusFormat::jsonl ? parse_passage_json(line) : parse_tsv(line);
            if (corpus.add(std::move(p), mode == IngestMode::lenient)) {
                ++report.duplicates_replaced;
                report.issues.push_back({line_no, "duplicate id replaced an earlier record"});
            }
            ++report.records;
        } catch (const std::invalid_argument& e) {
            if (mode == IngestMode::strict) throw CorpusFormatError(line_no, e.what());
            ++report.skipped;
            report.issues.push_back({line_no, e.what()});
        }
    }
    if (in.bad()) throw IoError("read failure on corpus file: " + path.string());
    return report;
}

IngestResult ingest_corpus(const std::filesystem::path& path, CorpusFormat format, IngestMode mode,
                           const text::TokenizerConfig& tokenizer) {
    auto corpus = std::make_shared<Corpus>(tokenizer);
    auto report = ingest_into(*corpus, path, format, mode);
    return {std::move(corpus), std::move(report)};
}

} // namespace ragloop::corpus
