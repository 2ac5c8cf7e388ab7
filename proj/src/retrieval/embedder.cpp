#include "ragloop/retrieval/embedder.hpp"

#include "ragloop/net/http.hpp"

#include <json.hpp>

#include <cmath>
#include <stdexcept>

namespace ragloop::retrieval {

using nlohmann::json;

void check_embeddings(const std::vector<std::vector<double>>& vectors, std::size_t n_inputs) {
    if (vectors.size() != n_inputs)
        throw EmbedderError("embedder returned " + std::to_string(vectors.size()) + " vectors for " +
                            std::to_string(n_inputs) + " inputs");
    for (const auto& v : vectors) {
        if (v.size() != vectors.front().size())
            throw EmbedderError("embedder returned vectors of differing dimension");
    }
    if (!vectors.empty() && vectors.front().empty()) throw EmbedderError("embedder returned empty vectors");
}

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vectors differ in dimension");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

HttpEmbedder::HttpEmbedder(HttpEmbedderConfig config) : config_(std::move(config)) {}

std::vector<std::vector<double>> HttpEmbedder::embed(const std::vector<std::string>& texts) {
    const auto endpoint = net::parse_url(config_.url);
    json body{{"input", texts}};
    if (!config_.model.empty()) body["model"] = config_.model;

    net::HttpResponse res;
    try {
        res = net::post_json(endpoint, "", body.dump(), {config_.timeout, config_.api_key});
    } catch (const net::TransportError& e) {
        throw EmbedderError(e.what());
    }
    if (res.status < 200 || res.status >= 300)
        throw EmbedderError("embeddings endpoint returned HTTP " + std::to_string(res.status));

    std::vector<std::vector<double>> out;
    try {
        const auto j = json::parse(res.body);
        const auto& data = j.at("data");
        out.resize(data.size());
        for (std::size_t i = 0; i < data.size(); ++i) {
            const auto slot = data[i].value("index", i);
            if (slot >= out.size()) throw EmbedderError("embedding index out of range");
            out[slot] = data[i].at("embedding").get<std::vector<double>>();
        }
    } catch (const json::exception& e) {
        throw EmbedderError(std::string("malformed embeddings response: ") + e.what());
    }
    check_embeddings(out, texts.size());
    return out;
}

} // namespace ragloop::retrieval
