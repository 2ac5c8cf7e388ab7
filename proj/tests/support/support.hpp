#pragma once

#include "ragloop/corpus/corpus.hpp"
#include "ragloop/llm/scripted.hpp"
#include "ragloop/retrieval/retriever.hpp"

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace ragloop::testing {

inline std::filesystem::path data_dir() { return RAGLOOP_TEST_DATA; }

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::filesystem::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    out << content;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
        path_ = std::filesystem::temp_directory_path() /
                ("ragloop-test-" + std::to_string(stamp) + "-" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline corpus::CorpusHandle make_corpus(const std::vector<corpus::Passage>& passages) {
    auto c = std::make_shared<corpus::Corpus>();
    for (const auto& p : passages) c->add(p);
    return c;
}

inline corpus::CorpusHandle toy_corpus() {
    return make_corpus({{"d1", "", "cat sat", {}}, {"d2", "", "dog sat", {}}});
}

/// Returns the same passages for every query, so reflector calls always happen.
class FixedRetriever final : public retrieval::Retriever {
public:
    explicit FixedRetriever(std::vector<corpus::Passage> passages) : passages_(std::move(passages)) {}
    retrieval::RetrievedDocs retrieve(std::string_view) const override {
        retrieval::RetrievedDocs docs;
        for (const auto& p : passages_) docs.result.hits.push_back({p.id, 1.0, std::nullopt});
        docs.passages = passages_;
        return docs;
    }

private:
    std::vector<corpus::Passage> passages_;
};

inline corpus::Passage sample_passage() {
    return {"p1", "Sample", "The sample passage says that the answer is forty-two.", {}};
}

inline std::string search_reply(const std::string& thought, const std::string& query) {
    return "### Thought: " + thought + "\n### Action - Search Input: " + query;
}

inline std::string final_reply(const std::string& answer = "") {
    std::string out = "### Thought: I have the final answer";
    if (!answer.empty()) out += "\n### Action - Final Answer: " + answer;
    return out;
}

} // namespace ragloop::testing
