#include "ragloop/retrieval/retriever.hpp"

namespace ragloop::retrieval {

namespace {

std::vector<corpus::Passage> materialize(const corpus::Corpus& corpus, const RetrievalResult& result) {
    std::vector<corpus::Passage> out;
    out.reserve(result.hits.size());
    for (const auto& hit : result.hits) out.push_back(corpus.at(hit.passage_id));
    return out;
}

} // namespace

Bm25Retriever::Bm25Retriever(const Bm25Index& index, Bm25RetrieverOptions options, Embedder* embedder)
    : index_(index), options_(std::move(options)), embedder_(embedder) {
    if (options_.top_k == 0) throw ConfigError("top_k must be positive");
    if (options_.use_reranker && embedder_ == nullptr)
        throw ConfigError("reranking is enabled but no embedder is configured");
}

RetrievedDocs Bm25Retriever::retrieve(std::string_view query) const {
    RetrievedDocs docs;
    if (!options_.use_reranker) {
        docs.result = index_.search(query, options_.top_k);
    } else {
        const std::size_t k_final = options_.k_final.value_or(options_.top_k);
        const auto sparse = index_.search(query, k_final * std::max<std::size_t>(1, options_.pool_multiplier));
        try {
            docs.result = rerank(index_, query, sparse, k_final, *embedder_, options_.rerank);
        } catch (const RerankError& e) {
            docs.result = e.sparse();
            if (docs.result.hits.size() > k_final) docs.result.hits.resize(k_final);
            docs.fallback_reason = e.what();
        }
    }
    docs.passages = materialize(index_.corpus(), docs.result);
    return docs;
}

RetrievalResult oracle_retrieve(const std::string& question_id, const ReferenceMap& references) {
    auto it = references.find(question_id);
    if (it == references.end()) throw UnmappedQuestion(question_id);
    RetrievalResult out;
    for (const auto& id : it->second) out.hits.push_back({id, kOracleScore, std::nullopt});
    return out;
}

OracleRetriever::OracleRetriever(corpus::CorpusHandle corpus, std::vector<std::string> gold_ids)
    : corpus_(std::move(corpus)), gold_ids_(std::move(gold_ids)) {
    for (const auto& id : gold_ids_) {
        if (!corpus_->contains(id)) throw corpus::PassageNotFound(id);
    }
}

RetrievedDocs OracleRetriever::retrieve(std::string_view) const {
    RetrievedDocs docs;
    for (const auto& id : gold_ids_) docs.result.hits.push_back({id, kOracleScore, std::nullopt});
    docs.passages = materialize(*corpus_, docs.result);
    return docs;
}

} // namespace ragloop::retrieval
