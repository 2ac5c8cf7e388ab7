#pragma once

#include "ragloop/corpus/corpus.hpp"
#include "ragloop/error.hpp"
#include "ragloop/text/tokenizer.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ragloop::retrieval {

/// Okapi BM25 constants.
struct Bm25Params {
    double k1{1.2};
    double b{0.75};

    friend bool operator==(const Bm25Params&, const Bm25Params&) = default;
};

struct Posting {
    std::uint32_t doc{0}; ///< position in `Bm25Index::doc_ids()`
    std::uint32_t tf{0};

    friend bool operator==(const Posting&, const Posting&) = default;
};

struct Hit {
    std::string passage_id;
    double sparse_score{0.0};
    std::optional<double> rerank_score;

    friend bool operator==(const Hit&, const Hit&) = default;
};

enum class Stage { sparse, reranked };

/// Ranked hits. Sparse results are ordered by descending sparse score with ties
/// on ascending passage id; reranked results by descending rerank score with
/// ties keeping their sparse rank.
struct RetrievalResult {
    std::vector<Hit> hits;
    Stage stage{Stage::sparse};

    friend bool operator==(const RetrievalResult&, const RetrievalResult&) = default;
};

class UnknownDocument : public Error {
public:
    explicit UnknownDocument(const std::string& id) : Error("unknown document: " + id) {}
};

class IndexFormatError : public Error {
public:
    using Error::Error;
};

/// Immutable inverted index over a corpus. Safe for concurrent searches.
class Bm25Index {
public:
    /// Throws `ConfigError` when the corpus is empty.
    static Bm25Index build(corpus::CorpusHandle corpus, text::TokenizerConfig cfg = {},
                           Bm25Params params = {});

    /// Okapi BM25 of `doc` for the given query tokens. Repeated query tokens
    /// contribute once per occurrence.
    double score(const std::vector<std::string>& query_terms, std::string_view doc) const;

    /// Top `top_k` documents with a positive score. Throws
    /// `std::invalid_argument` when `top_k` is zero.
    RetrievalResult search(std::string_view query, std::size_t top_k) const;

    double idf(std::string_view term) const;
    std::size_t doc_freq(std::string_view term) const;

    const std::vector<Posting>* postings(std::string_view term) const;
    const std::map<std::string, std::vector<Posting>, std::less<>>& all_postings() const noexcept {
        return postings_;
    }
    const std::vector<std::string>& doc_ids() const noexcept { return doc_ids_; }
    const std::vector<std::uint32_t>& doc_lengths() const noexcept { return doc_lengths_; }
    std::uint32_t doc_length(std::string_view doc) const;
    const corpus::CorpusStats& stats() const noexcept { return stats_; }
    const text::TokenizerConfig& tokenizer() const noexcept { return tokenizer_; }
    const Bm25Params& params() const noexcept { return params_; }
    const corpus::Corpus& corpus() const noexcept { return *corpus_; }
    const corpus::CorpusHandle& corpus_handle() const noexcept { return corpus_; }

    /// Writes the index (passages included) to `path`.
    void save(const std::filesystem::path& path) const;

    /// Loads an index written by `save`. When `expected_tokenizer` is given
    /// and differs from the stored config, throws `IndexFormatError`.
    static Bm25Index load(const std::filesystem::path& path,
                          const std::optional<text::TokenizerConfig>& expected_tokenizer = std::nullopt);

    friend bool operator==(const Bm25Index& a, const Bm25Index& b);

private:
    Bm25Index() = default;
    std::uint32_t doc_index(std::string_view doc) const;
    double term_weight(double idf, std::uint32_t tf, std::uint32_t dl) const;

    corpus::CorpusHandle corpus_;
    text::TokenizerConfig tokenizer_;
    Bm25Params params_;
    corpus::CorpusStats stats_;
    std::vector<std::string> doc_ids_;
    std::vector<std::uint32_t> doc_lengths_;
    std::map<std::string, std::vector<Posting>, std::less<>> postings_;
};

/// Sorts hits by descending sparse score, ascending id.
void sort_sparse(std::vector<Hit>& hits);

} // namespace ragloop::retrieval
