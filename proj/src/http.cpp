#include "apisum/http.hpp"

#include <thread>

#include <httplib.h>

#include "apisum/error.hpp"

namespace apisum {

namespace {

struct SplitUrl {
    std::string origin;  // scheme://host[:port]
    std::string target;  // /path?query
};

SplitUrl split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw Error(ErrorCode::kInvalidConfig, "not an absolute URL: " + redact_url(url));
    }
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

class HttplibTransport final : public HttpTransport {
public:
    explicit HttplibTransport(std::chrono::seconds timeout) : timeout_(timeout) {}

    HttpResponse send(const HttpRequest& request) override {
        const auto parts = split_url(request.url);
        httplib::Client client(parts.origin);
        client.set_connection_timeout(timeout_);
        client.set_read_timeout(timeout_);
        client.set_write_timeout(timeout_);

        httplib::Headers headers;
        for (const auto& [name, value] : request.headers) headers.emplace(name, value);

        httplib::Result result;
        if (request.method == "POST") {
            result = client.Post(parts.target, headers, request.body,
                                 request.content_type.empty() ? "application/json" : request.content_type);
        } else {
            result = client.Get(parts.target, headers);
        }

        HttpResponse response;
        if (!result) {
            response.transport_error = httplib::to_string(result.error());
            return response;
        }
        response.status = result->status;
        response.body = result->body;
        return response;
    }

private:
    std::chrono::seconds timeout_;
};

}  // namespace

std::unique_ptr<HttpTransport> make_http_transport(std::chrono::seconds timeout) {
    return std::make_unique<HttplibTransport>(timeout);
}

Sleeper real_sleeper() {
    return [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

bool is_transient(const HttpResponse& response) {
    return response.transport_failed() || response.status == 429 || response.status >= 500;
}

HttpResponse send_with_retry(HttpTransport& transport, const HttpRequest& request,
                             const RetryPolicy& policy, const Sleeper& sleep) {
    HttpResponse response;
    for (int attempt = 0;; ++attempt) {
        response = transport.send(request);
        if (!is_transient(response)) return response;
        if (attempt >= policy.max_retries) break;
        sleep(policy.delay_for(attempt));
    }
    const std::string detail = response.transport_failed()
                                   ? response.transport_error
                                   : "HTTP " + std::to_string(response.status);
    throw Error(ErrorCode::kNetworkError,
                redact_url(request.url) + " failed after " + std::to_string(policy.max_retries) +
                    " retries (" + detail + ")");
}

std::string redact_url(const std::string& url) {
    const auto q = url.find('?');
    return q == std::string::npos ? url : url.substr(0, q);
}

}  // namespace apisum
