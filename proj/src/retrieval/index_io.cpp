#include "ragloop/retrieval/bm25_index.hpp"

#include <json.hpp>

#include <fstream>

namespace ragloop::retrieval {

using nlohmann::json;

namespace {

constexpr const char* kFormatName = "ragloop-bm25";
constexpr int kFormatVersion = 1;

json tokenizer_json(const text::TokenizerConfig& cfg) {
    return json{{"lowercase", cfg.lowercase},
                {"split", "non-alphanumeric"},
                {"stemming", "none"},
                {"stopwords", cfg.stopwords}};
}

text::TokenizerConfig tokenizer_from_json(const json& j) {
    text::TokenizerConfig cfg;
    cfg.lowercase = j.at("lowercase").get<bool>();
    for (const auto& w : j.at("stopwords")) cfg.stopwords.insert(w.get<std::string>());
    if (j.value("split", "") != "non-alphanumeric" || j.value("stemming", "") != "none")
        throw IndexFormatError("index uses an unsupported tokenizer variant");
    return cfg;
}

} // namespace

void Bm25Index::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write index file: " + path.string());

    json header{{"format", kFormatName},
                {"version", kFormatVersion},
                {"tokenizer", tokenizer_json(tokenizer_)},
                {"bm25", {{"k1", params_.k1}, {"b", params_.b}}},
                {"doc_count", doc_ids_.size()},
                {"term_count", postings_.size()}};
    out << header.dump() << '\n';

    const auto& passages = corpus_->passages();
    for (std::size_t d = 0; d < passages.size(); ++d) {
        const auto& p = passages[d];
        json j{{"id", p.id}, {"title", p.title}, {"text", p.text}, {"len", doc_lengths_[d]}};
        if (!p.links.empty()) j["links"] = p.links;
        out << j.dump() << '\n';
    }
    for (const auto& [term, list] : postings_) {
        json flat = json::array();
        for (const auto& p : list) {
            flat.push_back(p.doc);
            flat.push_back(p.tf);
        }
        out << json{{"t", term}, {"p", std::move(flat)}}.dump() << '\n';
    }
    if (!out) throw IoError("write failure on index file: " + path.string());
}

Bm25Index Bm25Index::load(const std::filesystem::path& path,
                          const std::optional<text::TokenizerConfig>& expected_tokenizer) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open index file: " + path.string());

    std::string line;
    std::size_t line_no = 0;
    auto next = [&]() -> json {
        if (!std::getline(in, line)) throw IndexFormatError("index file truncated at line " + std::to_string(line_no + 1));
        ++line_no;
        try {
            return json::parse(line);
        } catch (const json::parse_error& e) {
            throw IndexFormatError("index line " + std::to_string(line_no) + ": " + e.what());
        }
    };

    Bm25Index index;
    try {
        const json header = next();
        if (!header.is_object() || header.value("format", "") != kFormatName)
            throw IndexFormatError("not a ragloop index: " + path.string());
        if (header.at("version").get<int>() != kFormatVersion)
            throw IndexFormatError("unsupported index version " + header.at("version").dump());

        index.tokenizer_ = tokenizer_from_json(header.at("tokenizer"));
        if (expected_tokenizer && *expected_tokenizer != index.tokenizer_)
            throw IndexFormatError("tokenizer config of " + path.string() +
                                   " does not match the requested config");
        index.params_.k1 = header.at("bm25").at("k1").get<double>();
        index.params_.b = header.at("bm25").at("b").get<double>();

        const auto doc_count = header.at("doc_count").get<std::size_t>();
        const auto term_count = header.at("term_count").get<std::size_t>();
        if (doc_count == 0) throw IndexFormatError("index holds no documents");

        auto corpus = std::make_shared<corpus::Corpus>(index.tokenizer_);
        for (std::size_t d = 0; d < doc_count; ++d) {
            const json j = next();
            corpus::Passage p;
            p.id = j.at("id").get<std::string>();
            p.title = j.value("title", "");
            p.text = j.at("text").get<std::string>();
            if (j.contains("links")) p.links = j.at("links").get<std::vector<std::string>>();
            index.doc_ids_.push_back(p.id);
            index.doc_lengths_.push_back(j.at("len").get<std::uint32_t>());
            index.stats_.total_tokens += index.doc_lengths_.back();
            corpus->add(std::move(p));
        }
        for (std::size_t t = 0; t < term_count; ++t) {
            const json j = next();
            const auto& flat = j.at("p");
            if (flat.size() % 2 != 0) throw IndexFormatError("odd posting array at line " + std::to_string(line_no));
            std::vector<Posting> list;
            list.reserve(flat.size() / 2);
            for (std::size_t i = 0; i < flat.size(); i += 2) {
                Posting p{flat[i].get<std::uint32_t>(), flat[i + 1].get<std::uint32_t>()};
                if (p.doc >= doc_count || p.tf == 0)
                    throw IndexFormatError("invalid posting at line " + std::to_string(line_no));
                list.push_back(p);
            }
            index.postings_.emplace(j.at("t").get<std::string>(), std::move(list));
        }
        index.stats_.doc_count = doc_count;
        index.stats_.avg_doc_len =
            static_cast<double>(index.stats_.total_tokens) / static_cast<double>(doc_count);
        index.corpus_ = std::move(corpus);
    } catch (const json::exception& e) {
        throw IndexFormatError("malformed index near line " + std::to_string(line_no) + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw IndexFormatError("invalid passage in index near line " + std::to_string(line_no) + ": " + e.what());
    }
    return index;
}

} // namespace ragloop::retrieval
