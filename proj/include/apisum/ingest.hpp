#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "apisum/http.hpp"

namespace apisum {

using Timestamp = std::int64_t;  // UTC seconds since epoch

struct Question {
    std::int64_t id = 0;
    std::string title;
    std::string body_html;
    std::vector<std::string> tags;
    Timestamp creation_date = 0;
    std::int64_t score = 0;

    bool operator==(const Question&) const = default;
};

struct Answer {
    std::int64_t id = 0;
    std::int64_t question_id = 0;
    std::string body_html;
    std::int64_t score = 0;
    Timestamp creation_date = 0;
    bool is_accepted = false;

    bool operator==(const Answer&) const = default;
};

enum class SourceKind { kLiveApi, kDumpFile };

struct IngestConfig {
    std::string tag = "android";
    Timestamp date_from = 1230768000;  // 2009-01-01T00:00:00Z
    Timestamp date_to = 1588291199;    // 2020-04-30T23:59:59Z
    SourceKind source = SourceKind::kDumpFile;
    int page_size = 100;
    std::optional<std::string> api_key;

    /// Throws INVALID_CONFIG when the window is empty or page_size is out of [1,100].
    void validate() const;
    bool in_window(Timestamp t) const { return t >= date_from && t <= date_to; }
};

/// Parses "YYYY-MM-DD", "YYYY-MM-DDTHH:MM:SSZ" or a decimal epoch value.
Timestamp parse_timestamp(std::string_view text);

// Post store records. Field `kind` distinguishes the two types.
nlohmann::json to_json(const Question& q);
nlohmann::json to_json(const Answer& a);
Question question_from_json(const nlohmann::json& j);
Answer answer_from_json(const nlohmann::json& j);

struct PostStore {
    std::vector<Question> questions;
    std::vector<Answer> answers;
};

struct DumpReadResult {
    PostStore posts;
    std::size_t skipped_count = 0;   // malformed or duplicate lines
    std::size_t filtered_count = 0;  // well-formed records failing tag/date/parent checks
};

/// Reads a JSONL post dump, keeping records inside the tag and date window.
/// Answers survive only if their question does. Questions are emitted before
/// answers, each in file order.
DumpReadResult read_dump(const std::filesystem::path& path, const IngestConfig& config);

/// Serializes a store in the same JSONL format `read_dump` accepts.
std::string write_post_store(const PostStore& store);

enum class ThresholdMode { kMean, kFixed };

struct ThresholdSpec {
    ThresholdMode mode = ThresholdMode::kMean;
    std::int64_t fixed_value = 2;
};

/// Inclusive keep-threshold: answers with score >= result are kept.
/// kMean yields floor(mean score); throws EMPTY_COLLECTION on no answers.
std::int64_t compute_score_threshold(std::span<const Answer> answers, const ThresholdSpec& spec);

/// Client for a Stack Exchange API v2.3 compatible endpoint.
class StackExchangeClient {
public:
    static constexpr std::string_view kDefaultBaseUrl = "https://api.stackexchange.com/2.3";

    StackExchangeClient(HttpTransport& transport, IngestConfig config,
                        std::string base_url = std::string(kDefaultBaseUrl),
                        Sleeper sleep = real_sleeper(), RetryPolicy retry = {});

    /// Streams questions in server order (ascending creation date), deduplicated by id.
    void fetch_questions(const std::function<void(const Question&)>& sink);

    /// Streams answers for `question_ids`, deduplicated by id.
    void fetch_answers(std::span<const std::int64_t> question_ids,
                       const std::function<void(const Answer&)>& sink);

    std::size_t requests_sent() const { return requests_sent_; }

private:
    nlohmann::json get_page(const std::string& path, int page);
    std::string query_suffix(int page, bool tagged) const;

    HttpTransport& transport_;
    IngestConfig config_;
    std::string base_url_;
    Sleeper sleep_;
    RetryPolicy retry_;
    std::int64_t pending_backoff_s_ = 0;
    std::size_t requests_sent_ = 0;
};

}  // namespace apisum
