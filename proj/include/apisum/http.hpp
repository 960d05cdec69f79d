#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace apisum {

struct HttpRequest {
    std::string method = "GET";
    std::string url;  // absolute: scheme://host[:port]/path[?query]
    std::vector<std::pair<std::string, std::string>> headers;
    std::string body;
    std::string content_type;
};

struct HttpResponse {
    int status = 0;
    std::string body;
    std::string transport_error;  // set when no HTTP response was received

    bool transport_failed() const { return !transport_error.empty(); }
};

/// Minimal request/response seam so live sources can be pointed at mocks.
class HttpTransport {
public:
    virtual ~HttpTransport() = default;
    virtual HttpResponse send(const HttpRequest& request) = 0;
};

std::unique_ptr<HttpTransport> make_http_transport(std::chrono::seconds timeout = std::chrono::seconds(30));

using Sleeper = std::function<void(std::chrono::milliseconds)>;

Sleeper real_sleeper();

/// Bounded exponential backoff: retry k (0-based) waits initial_delay * 2^k.
struct RetryPolicy {
    int max_retries = 3;
    std::chrono::milliseconds initial_delay{1000};

    std::chrono::milliseconds delay_for(int retry) const { return initial_delay * (1LL << retry); }
};

/// True for failures worth retrying: no response, 429, or any 5xx.
bool is_transient(const HttpResponse& response);

/// Sends with retries on transient failures. Returns the first non-transient
/// response; throws NETWORK_ERROR once the retry budget is spent.
HttpResponse send_with_retry(HttpTransport& transport, const HttpRequest& request,
                             const RetryPolicy& policy, const Sleeper& sleep);

/// Strips the query string so URLs carrying keys can appear in messages.
std::string redact_url(const std::string& url);

}  // namespace apisum
