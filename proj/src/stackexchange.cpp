#include <algorithm>
#include <cctype>
#include <chrono>
#include <string_view>
#include <unordered_set>

#include "apisum/error.hpp"
#include "apisum/ingest.hpp"

namespace apisum {

using nlohmann::json;

namespace {

constexpr std::size_t kIdsPerRequest = 100;

bool same_tag(std::string_view a, std::string_view b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](unsigned char x, unsigned char y) {
        return std::tolower(x) == std::tolower(y);
    });
}

bool has_tag(const Question& q, const std::string& tag) {
    return std::any_of(q.tags.begin(), q.tags.end(), [&](const std::string& t) { return same_tag(t, tag); });
}

std::string percent_encode(std::string_view s) {
    static constexpr char kHex[] = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : s) {
        if (std::isalnum(c) || c == '-' || c == '.' || c == '_' || c == '~') {
            out += static_cast<char>(c);
        } else {
            out += '%';
            out += kHex[c >> 4];
            out += kHex[c & 15];
        }
    }
    return out;
}

}  // namespace

StackExchangeClient::StackExchangeClient(HttpTransport& transport, IngestConfig config,
                                         std::string base_url, Sleeper sleep, RetryPolicy retry)
    : transport_(transport),
      config_(std::move(config)),
      base_url_(std::move(base_url)),
      sleep_(std::move(sleep)),
      retry_(retry) {
    config_.validate();
    while (!base_url_.empty() && base_url_.back() == '/') base_url_.pop_back();
}

std::string StackExchangeClient::query_suffix(int page, bool tagged) const {
    std::string q = "?site=stackoverflow&filter=withbody&sort=creation&order=asc";
    if (tagged) q += "&tagged=" + percent_encode(config_.tag);
    q += "&fromdate=" + std::to_string(config_.date_from);
    q += "&todate=" + std::to_string(config_.date_to);
    q += "&pagesize=" + std::to_string(config_.page_size);
    q += "&page=" + std::to_string(page);
    if (config_.api_key && !config_.api_key->empty()) q += "&key=" + *config_.api_key;
    return q;
}

json StackExchangeClient::get_page(const std::string& path, int page) {
    if (pending_backoff_s_ > 0) {
        sleep_(std::chrono::seconds(pending_backoff_s_));
        pending_backoff_s_ = 0;
    }
    HttpRequest request;
    request.url = base_url_ + path + query_suffix(page, path == "/questions");
    ++requests_sent_;
    const auto response = send_with_retry(transport_, request, retry_, sleep_);

    json body;
    try {
        body = json::parse(response.body);
    } catch (const json::exception&) {
        throw Error(ErrorCode::kMalformedResponse,
                    redact_url(request.url) + " returned an undecodable payload");
    }
    if (!body.is_object()) {
        throw Error(ErrorCode::kMalformedResponse, redact_url(request.url) + " returned a non-object payload");
    }

    if (body.contains("backoff") && body["backoff"].is_number_integer()) {
        pending_backoff_s_ = body["backoff"].get<std::int64_t>();
    }

    const auto error_name = body.value("error_name", std::string());
    if (response.status != 200 || !error_name.empty()) {
        if (error_name == "throttle_violation" || body.value("error_id", 0) == 502) {
            throw Error(ErrorCode::kQuotaExceeded, body.value("error_message", std::string("throttled")));
        }
        throw Error(ErrorCode::kNetworkError, redact_url(request.url) + " returned HTTP " +
                                                  std::to_string(response.status) + " " + error_name);
    }
    if (!body.contains("items") || !body["items"].is_array()) {
        throw Error(ErrorCode::kMalformedResponse, redact_url(request.url) + " response has no items array");
    }
    return body;
}

void StackExchangeClient::fetch_questions(const std::function<void(const Question&)>& sink) {
    std::unordered_set<std::int64_t> seen;
    for (int page = 1;; ++page) {
        const auto body = get_page("/questions", page);
        for (const auto& item : body["items"]) {
            Question q;
            try {
                q.id = item.at("question_id").get<std::int64_t>();
                q.title = item.value("title", std::string());
                q.body_html = item.value("body", std::string());
                q.tags = item.value("tags", std::vector<std::string>{});
                q.creation_date = item.at("creation_date").get<std::int64_t>();
                q.score = item.value("score", std::int64_t{0});
            } catch (const json::exception& e) {
                throw Error(ErrorCode::kMalformedResponse, std::string("question item: ") + e.what());
            }
            if (!has_tag(q, config_.tag) || !config_.in_window(q.creation_date)) continue;
            if (!seen.insert(q.id).second) continue;
            sink(q);
        }
        const bool has_more = body.value("has_more", false);
        if (!has_more) break;
        if (body.value("quota_remaining", 1) <= 0) {
            throw Error(ErrorCode::kQuotaExceeded, "quota exhausted with more pages pending");
        }
    }
}

void StackExchangeClient::fetch_answers(std::span<const std::int64_t> question_ids,
                                        const std::function<void(const Answer&)>& sink) {
    std::unordered_set<std::int64_t> seen;
    for (std::size_t start = 0; start < question_ids.size(); start += kIdsPerRequest) {
        const auto batch = question_ids.subspan(start, std::min(kIdsPerRequest, question_ids.size() - start));
        const std::unordered_set<std::int64_t> wanted(batch.begin(), batch.end());
        std::string ids;
        for (const auto id : batch) {
            if (!ids.empty()) ids += "%3B";
            ids += std::to_string(id);
        }
        for (int page = 1;; ++page) {
            const auto body = get_page("/questions/" + ids + "/answers", page);
            for (const auto& item : body["items"]) {
                Answer a;
                try {
                    a.id = item.at("answer_id").get<std::int64_t>();
                    a.question_id = item.at("question_id").get<std::int64_t>();
                    a.body_html = item.value("body", std::string());
                    a.score = item.value("score", std::int64_t{0});
                    a.creation_date = item.at("creation_date").get<std::int64_t>();
                    a.is_accepted = item.value("is_accepted", false);
                } catch (const json::exception& e) {
                    throw Error(ErrorCode::kMalformedResponse, std::string("answer item: ") + e.what());
                }
                if (!wanted.contains(a.question_id) || !config_.in_window(a.creation_date)) continue;
                if (!seen.insert(a.id).second) continue;
                sink(a);
            }
            if (!body.value("has_more", false)) break;
            if (body.value("quota_remaining", 1) <= 0) {
                throw Error(ErrorCode::kQuotaExceeded, "quota exhausted with more pages pending");
            }
        }
    }
}

}  // namespace apisum
