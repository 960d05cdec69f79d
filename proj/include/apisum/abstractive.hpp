#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <mutex>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "apisum/corpus.hpp"
#include "apisum/http.hpp"
#include "apisum/summary.hpp"

namespace apisum {

enum class CompletionMode { kLive, kFixture };

struct CompletionConfig {
    std::string endpoint_url = "https://api.openai.com/v1/completions";
    std::string model_name = "gpt-3.5-turbo-instruct";
    int max_output_tokens = 120;
    double temperature = 0.0;
    std::string api_key;  // secret; never serialized
    CompletionMode mode = CompletionMode::kLive;
    std::filesystem::path fixture_path;
    std::string response_text_path = "choices[0].text";
    std::size_t prompt_char_cap = 12000;
    int requests_per_minute = 20;

    void validate() const;
    /// Everything except the secret.
    nlohmann::json public_json() const;
};

struct Prompt {
    std::string text;
    std::string corpus_fingerprint;
    bool truncated = false;
};

inline constexpr std::string_view kTruncationMarker = "[truncated]";

/// SHA-256 (hex) over the api key and the ordered sentence texts.
std::string corpus_fingerprint(const ApiCorpus& corpus);

/// Instruction line plus the corpus sentences as a numbered list. Whole lines
/// are dropped past `char_cap` bytes and replaced by the truncation marker.
Prompt build_prompt(const ApiCorpus& corpus, std::size_t char_cap = 12000);

/// Spaces request starts at least 60/rpm seconds apart, across threads.
class RateLimiter {
public:
    using Clock = std::function<std::chrono::steady_clock::time_point()>;

    explicit RateLimiter(int requests_per_minute, Sleeper sleep = real_sleeper(),
                         Clock now = [] { return std::chrono::steady_clock::now(); });

    void acquire();

private:
    std::mutex mutex_;
    std::chrono::nanoseconds interval_;
    Sleeper sleep_;
    Clock now_;
    std::chrono::steady_clock::time_point next_slot_{};
    bool first_ = true;
};

/// Injection points for the live path. Null members fall back to defaults.
struct CompletionDeps {
    HttpTransport* transport = nullptr;
    Sleeper sleep;
    RetryPolicy retry;
    RateLimiter* limiter = nullptr;
};

/// Extracts a string at a path like "choices[0].text"; throws MALFORMED_RESPONSE.
std::string json_text_at(const nlohmann::json& body, std::string_view path);

/// Completion text (trimmed) for a prompt. Throws NETWORK_ERROR, AUTH_ERROR,
/// FIXTURE_MISS, EMPTY_COMPLETION or MALFORMED_RESPONSE.
std::string complete(const Prompt& prompt, const CompletionConfig& config, const CompletionDeps& deps = {});

Summary summarize_abstractive(const ApiCorpus& corpus, const CompletionConfig& config,
                              const CompletionDeps& deps = {});

}  // namespace apisum
