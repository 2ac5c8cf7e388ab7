#pragma once

#include "ragloop/retrieval/bm25_index.hpp"
#include "ragloop/retrieval/embedder.hpp"

#include <string>
#include <string_view>

namespace ragloop::retrieval {

struct RerankOptions {
    std::size_t batch_size{16};
    std::size_t max_in_flight{4};
    std::string query_prefix;
    std::string passage_prefix;
};

/// Raised when the dense stage fails; carries the sparse result for fallback.
class RerankError : public Error {
public:
    RerankError(const std::string& what, RetrievalResult sparse)
        : Error(what), sparse_(std::move(sparse)) {}
    const RetrievalResult& sparse() const noexcept { return sparse_; }

private:
    RetrievalResult sparse_;
};

/// Reorders `candidates` by cosine similarity between the query embedding and
/// each passage embedding, keeping sparse order among equal similarities, and
/// truncates to `k_final`.
RetrievalResult rerank(const Bm25Index& index, std::string_view query,
                       const RetrievalResult& candidates, std::size_t k_final, Embedder& embedder,
                       const RerankOptions& options = {});

} // namespace ragloop::retrieval
