#include "ragloop/retrieval/bm25_index.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace ragloop::retrieval {

void sort_sparse(std::vector<Hit>& hits) {
    std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
        if (a.sparse_score != b.sparse_score) return a.sparse_score > b.sparse_score;
        return a.passage_id < b.passage_id;
    });
}

Bm25Index Bm25Index::build(corpus::CorpusHandle corpus, text::TokenizerConfig cfg, Bm25Params params) {
    if (!corpus || corpus->empty()) throw ConfigError("cannot build an index over an empty corpus");

    Bm25Index index;
    index.corpus_ = std::move(corpus);
    index.tokenizer_ = std::move(cfg);
    index.params_ = params;

    const auto& passages = index.corpus_->passages();
    index.doc_ids_.reserve(passages.size());
    index.doc_lengths_.reserve(passages.size());

    std::unordered_map<std::string, std::uint32_t> tf;
    for (std::uint32_t d = 0; d < passages.size(); ++d) {
        const auto tokens = text::tokenize(passages[d].indexed_text(), index.tokenizer_);
        tf.clear();
        for (const auto& t : tokens) ++tf[t];
        for (const auto& [term, count] : tf) index.postings_[term].push_back({d, count});
        index.doc_ids_.push_back(passages[d].id);
        index.doc_lengths_.push_back(static_cast<std::uint32_t>(tokens.size()));
        index.stats_.total_tokens += tokens.size();
    }
    // Documents are visited in order, so every posting list is already sorted.
    index.stats_.doc_count = passages.size();
    index.stats_.avg_doc_len =
        static_cast<double>(index.stats_.total_tokens) / static_cast<double>(index.stats_.doc_count);
    return index;
}

const std::vector<Posting>* Bm25Index::postings(std::string_view term) const {
    auto it = postings_.find(term);
    return it == postings_.end() ? nullptr : &it->second;
}

std::size_t Bm25Index::doc_freq(std::string_view term) const {
    const auto* p = postings(term);
    return p ? p->size() : 0;
}

double Bm25Index::idf(std::string_view term) const {
    const double n = static_cast<double>(stats_.doc_count);
    const double df = static_cast<double>(doc_freq(term));
    return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
}

double Bm25Index::term_weight(double idf, std::uint32_t tf, std::uint32_t dl) const {
    const double f = tf;
    const double norm = params_.k1 * (1.0 - params_.b + params_.b * dl / stats_.avg_doc_len);
    return idf * f * (params_.k1 + 1.0) / (f + norm);
}

std::uint32_t Bm25Index::doc_index(std::string_view doc) const {
    // Doc ids mirror corpus order; the corpus map gives O(1) lookup.
    const auto* p = corpus_->find(doc);
    if (!p) throw UnknownDocument(std::string(doc));
    return static_cast<std::uint32_t>(p - corpus_->passages().data());
}

std::uint32_t Bm25Index::doc_length(std::string_view doc) const {
    return doc_lengths_[doc_index(doc)];
}

double Bm25Index::score(const std::vector<std::string>& query_terms, std::string_view doc) const {
    const auto d = doc_index(doc);
    double total = 0.0;
    for (const auto& term : query_terms) {
        const auto* list = postings(term);
        if (!list) continue;
        auto it = std::lower_bound(list->begin(), list->end(), d,
                                   [](const Posting& p, std::uint32_t v) { return p.doc < v; });
        if (it == list->end() || it->doc != d) continue;
        total += term_weight(idf(term), it->tf, doc_lengths_[d]);
    }
    return total;
}

RetrievalResult Bm25Index::search(std::string_view query, std::size_t top_k) const {
    if (top_k == 0) throw std::invalid_argument("top_k must be positive");

    std::unordered_map<std::uint32_t, double> acc;
    for (const auto& term : text::tokenize(query, tokenizer_)) {
        const auto* list = postings(term);
        if (!list) continue;
        const double w = idf(term);
        for (const auto& p : *list) acc[p.doc] += term_weight(w, p.tf, doc_lengths_[p.doc]);
    }

    RetrievalResult result;
    result.hits.reserve(acc.size());
    for (const auto& [doc, s] : acc) {
        if (s > 0.0) result.hits.push_back({doc_ids_[doc], s, std::nullopt});
    }
    sort_sparse(result.hits);
    if (result.hits.size() > top_k) result.hits.resize(top_k);
    return result;
}

bool operator==(const Bm25Index& a, const Bm25Index& b) {
    return a.tokenizer_ == b.tokenizer_ && a.params_ == b.params_ && a.stats_ == b.stats_ &&
           a.doc_ids_ == b.doc_ids_ && a.doc_lengths_ == b.doc_lengths_ &&
           a.postings_ == b.postings_ && a.corpus_->passages() == b.corpus_->passages();
}

} // namespace ragloop::retrieval
