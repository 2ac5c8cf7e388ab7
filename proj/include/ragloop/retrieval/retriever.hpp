#pragma once

#include "ragloop/corpus/corpus.hpp"
#include "ragloop/retrieval/bm25_index.hpp"
#include "ragloop/retrieval/embedder.hpp"
#include "ragloop/retrieval/rerank.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ragloop::retrieval {

struct RetrievedDocs {
    RetrievalResult result;
    std::vector<corpus::Passage> passages; ///< in hit order
    /// Set when the dense stage failed and sparse hits were used instead.
    std::optional<std::string> fallback_reason;
};

/// The search tool seen by the agent loop.
class Retriever {
public:
    virtual ~Retriever() = default;
    virtual RetrievedDocs retrieve(std::string_view query) const = 0;
};

struct Bm25RetrieverOptions {
    std::size_t top_k{8};
    bool use_reranker{false};
    /// Hits kept after reranking; defaults to `top_k`.
    std::optional<std::size_t> k_final;
    /// Sparse candidates fetched per final hit before reranking.
    std::size_t pool_multiplier{4};
    RerankOptions rerank;
};

class Bm25Retriever final : public Retriever {
public:
    /// `embedder` may be null when `use_reranker` is false.
    Bm25Retriever(const Bm25Index& index, Bm25RetrieverOptions options, Embedder* embedder = nullptr);
    RetrievedDocs retrieve(std::string_view query) const override;

private:
    const Bm25Index& index_;
    Bm25RetrieverOptions options_;
    Embedder* embedder_;
};

using ReferenceMap = std::unordered_map<std::string, std::vector<std::string>>;

class UnmappedQuestion : public Error {
public:
    explicit UnmappedQuestion(const std::string& id) : Error("no reference passages for question " + id) {}
};

/// Score given to every oracle hit.
inline constexpr double kOracleScore = 1.0e300;

/// Gold reference passages of `question_id`, in reference order.
RetrievalResult oracle_retrieve(const std::string& question_id, const ReferenceMap& references);

/// Returns the gold passages of one question for every query.
class OracleRetriever final : public Retriever {
public:
    OracleRetriever(corpus::CorpusHandle corpus, std::vector<std::string> gold_ids);
    RetrievedDocs retrieve(std::string_view query) const override;

private:
    corpus::CorpusHandle corpus_;
    std::vector<std::string> gold_ids_;
};

} // namespace ragloop::retrieval
