#pragma once

#include "ragloop/error.hpp"

#include <chrono>
#include <string>
#include <string_view>

namespace ragloop::net {

/// Connection-level failure: refused, reset, timed out, TLS error.
class TransportError : public Error {
public:
    using Error::Error;
};

/// A base URL split into the origin httplib connects to and a path prefix.
struct Endpoint {
    std::string origin; ///< scheme://host[:port]
    std::string path_prefix;
};

/// Throws `ConfigError` for anything but http(s) URLs.
Endpoint parse_url(std::string_view url);

struct HttpOptions {
    std::chrono::milliseconds timeout{std::chrono::seconds(60)};
    std::string bearer_token;
};

struct HttpResponse {
    int status{0};
    std::string body;
};

/// POSTs a JSON body to `endpoint.path_prefix + path`. Non-2xx statuses are
/// returned to the caller; only transport failures throw.
HttpResponse post_json(const Endpoint& endpoint, std::string_view path, const std::string& body,
                       const HttpOptions& options);

} // namespace ragloop::net
