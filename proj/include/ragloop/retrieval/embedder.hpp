#pragma once

#include "ragloop/error.hpp"

#include <chrono>
#include <string>
#include <vector>

namespace ragloop::retrieval {

class EmbedderError : public Error {
public:
    using Error::Error;
};

/// Maps texts to dense vectors. Implementations must return one vector per
/// input, all of one dimension, and tolerate concurrent calls.
class Embedder {
public:
    virtual ~Embedder() = default;
    virtual std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) = 0;
};

struct HttpEmbedderConfig {
    std::string url; ///< full embeddings endpoint, e.g. http://host/v1/embeddings
    std::string model;
    std::string api_key;
    std::chrono::milliseconds timeout{std::chrono::seconds(60)};
};

/// Client for the common `{"input": [...]}` -> `{"data": [{"embedding": [...]}]}` shape.
class HttpEmbedder final : public Embedder {
public:
    explicit HttpEmbedder(HttpEmbedderConfig config);
    std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) override;

private:
    HttpEmbedderConfig config_;
};

/// Checks the embedder contract for a call with `n_inputs` texts.
void check_embeddings(const std::vector<std::vector<double>>& vectors, std::size_t n_inputs);

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);

} // namespace ragloop::retrieval
