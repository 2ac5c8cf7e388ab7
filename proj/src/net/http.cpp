#include "ragloop/net/http.hpp"

#include <httplib.h>

namespace ragloop::net {

Endpoint parse_url(std::string_view url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string_view::npos) throw ConfigError("URL lacks a scheme: " + std::string(url));
    const auto scheme = url.substr(0, scheme_end);
    if (scheme != "http" && scheme != "https")
        throw ConfigError("unsupported URL scheme '" + std::string(scheme) + "'");
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
    if (scheme == "https") throw ConfigError("https endpoints need a build with RAGLOOP_WITH_TLS");
#endif
    const auto host_start = scheme_end + 3;
    const auto path_start = url.find('/', host_start);
    Endpoint ep;
    ep.origin = std::string(url.substr(0, path_start));
    if (path_start != std::string_view::npos) ep.path_prefix = std::string(url.substr(path_start));
    while (!ep.path_prefix.empty() && ep.path_prefix.back() == '/') ep.path_prefix.pop_back();
    if (ep.origin.size() <= host_start) throw ConfigError("URL lacks a host: " + std::string(url));
    return ep;
}

HttpResponse post_json(const Endpoint& endpoint, std::string_view path, const std::string& body,
                       const HttpOptions& options) {
    httplib::Client client(endpoint.origin);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(options.timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(options.timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());
    if (!options.bearer_token.empty()) client.set_bearer_token_auth(options.bearer_token);

    const std::string full_path = endpoint.path_prefix + std::string(path);
    auto res = client.Post(full_path, body, "application/json");
    if (!res) {
        // Headers stay out of the message: they carry the bearer token.
        throw TransportError("POST " + endpoint.origin + full_path + " failed: " +
                             httplib::to_string(res.error()));
    }
    return {res->status, res->body};
}

} // namespace ragloop::net
