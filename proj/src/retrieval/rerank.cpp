#include "ragloop/retrieval/rerank.hpp"

#include <algorithm>
#include <future>
#include <numeric>

namespace ragloop::retrieval {

namespace {

std::vector<std::vector<double>> embed_batched(Embedder& embedder, const std::vector<std::string>& texts,
                                               const RerankOptions& options) {
    const std::size_t batch = std::max<std::size_t>(1, options.batch_size);
    const std::size_t in_flight = std::max<std::size_t>(1, options.max_in_flight);

    std::vector<std::vector<double>> out;
    out.reserve(texts.size());
    for (std::size_t wave = 0; wave < texts.size(); wave += batch * in_flight) {
        std::vector<std::future<std::vector<std::vector<double>>>> pending;
        for (std::size_t start = wave; start < texts.size() && start < wave + batch * in_flight;
             start += batch) {
            std::vector<std::string> chunk(texts.begin() + static_cast<std::ptrdiff_t>(start),
                                           texts.begin() + static_cast<std::ptrdiff_t>(
                                                               std::min(texts.size(), start + batch)));
            pending.push_back(std::async(std::launch::async, [&embedder, chunk = std::move(chunk)] {
                auto vecs = embedder.embed(chunk);
                check_embeddings(vecs, chunk.size());
                return vecs;
            }));
        }
        for (auto& f : pending) {
            auto vecs = f.get();
            std::move(vecs.begin(), vecs.end(), std::back_inserter(out));
        }
    }
    return out;
}

} // namespace

RetrievalResult rerank(const Bm25Index& index, std::string_view query, const RetrievalResult& candidates,
                       std::size_t k_final, Embedder& embedder, const RerankOptions& options) {
    if (k_final == 0) throw std::invalid_argument("k_final must be positive");

    RetrievalResult out;
    out.stage = Stage::reranked;
    if (candidates.hits.empty()) return out;

    std::vector<std::string> texts;
    texts.reserve(candidates.hits.size());
    for (const auto& hit : candidates.hits)
        texts.push_back(options.passage_prefix + index.corpus().at(hit.passage_id).indexed_text());

    std::vector<double> query_vec;
    std::vector<std::vector<double>> doc_vecs;
    try {
        auto q = embedder.embed({options.query_prefix + std::string(query)});
        check_embeddings(q, 1);
        query_vec = std::move(q.front());
        doc_vecs = embed_batched(embedder, texts, options);
        for (const auto& v : doc_vecs) {
            if (v.size() != query_vec.size())
                throw EmbedderError("query and passage embeddings differ in dimension");
        }
    } catch (const std::exception& e) {
        throw RerankError(std::string("rerank failed: ") + e.what(), candidates);
    }

    std::vector<std::size_t> order(candidates.hits.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> sim(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) sim[i] = cosine_similarity(query_vec, doc_vecs[i]);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sim[a] > sim[b]; });

    for (std::size_t i = 0; i < order.size() && i < k_final; ++i) {
        Hit h = candidates.hits[order[i]];
        h.rerank_score = sim[order[i]];
        out.hits.push_back(std::move(h));
    }
    return out;
}

} // namespace ragloop::retrieval
