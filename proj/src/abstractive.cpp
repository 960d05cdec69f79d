#include "apisum/abstractive.hpp"

#include <openssl/evp.h>

#include <array>
#include <cctype>
#include <memory>

#include "apisum/error.hpp"
#include "apisum/io.hpp"

namespace apisum {

using nlohmann::json;

void CompletionConfig::validate() const {
    if (max_output_tokens < 1) throw Error(ErrorCode::kInvalidConfig, "max_output_tokens must be >= 1");
    if (!(temperature >= 0.0)) throw Error(ErrorCode::kInvalidConfig, "temperature must be >= 0");
    if (requests_per_minute < 1) throw Error(ErrorCode::kInvalidConfig, "requests_per_minute must be >= 1");
    if (prompt_char_cap < 256) throw Error(ErrorCode::kInvalidConfig, "prompt_char_cap must be >= 256");
    if (mode == CompletionMode::kFixture && fixture_path.empty()) {
        throw Error(ErrorCode::kInvalidConfig, "fixture mode needs fixture_path");
    }
}

json CompletionConfig::public_json() const {
    return {{"endpoint_url", endpoint_url},
            {"model_name", model_name},
            {"max_output_tokens", max_output_tokens},
            {"temperature", temperature},
            {"mode", mode == CompletionMode::kLive ? "LIVE" : "FIXTURE"}};
}

namespace {

std::string sha256_hex(std::string_view data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorCode::kIoError, "SHA-256 failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out += kHex[digest[i] >> 4];
        out += kHex[digest[i] & 0xF];
    }
    return out;
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n\f\v");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n\f\v");
    return std::string(s.substr(first, last - first + 1));
}

}  // namespace

std::string corpus_fingerprint(const ApiCorpus& corpus) {
    // Length-prefixed fields keep the encoding unambiguous.
    std::string material;
    auto add = [&](std::string_view field) {
        material += std::to_string(field.size());
        material += ':';
        material += field;
    };
    add(corpus.api_key);
    for (const auto& s : corpus.sentences) add(s.text);
    return sha256_hex(material);
}

Prompt build_prompt(const ApiCorpus& corpus, std::size_t char_cap) {
    if (corpus.sentences.empty()) throw Error(ErrorCode::kEmptyCorpus, "no sentences for " + corpus.api_key);
    Prompt prompt;
    prompt.corpus_fingerprint = corpus_fingerprint(corpus);
    prompt.text = "Summarize what the API " + corpus.api_key + " does, based only on the following sentences.";

    // Room for "\n" + marker must remain whenever a line is dropped.
    const std::size_t reserve = 1 + kTruncationMarker.size();
    for (std::size_t i = 0; i < corpus.sentences.size(); ++i) {
        std::string line = "\n" + std::to_string(i + 1) + ". " + corpus.sentences[i].text;
        const bool last = i + 1 == corpus.sentences.size();
        const std::size_t limit = last ? char_cap : (char_cap > reserve ? char_cap - reserve : 0);
        if (prompt.text.size() + line.size() > limit) {
            prompt.truncated = true;
            break;
        }
        prompt.text += line;
    }
    if (prompt.truncated) {
        prompt.text += '\n';
        prompt.text += kTruncationMarker;
    }
    return prompt;
}

RateLimiter::RateLimiter(int requests_per_minute, Sleeper sleep, Clock now)
    : interval_(std::chrono::nanoseconds(std::chrono::minutes(1)) / std::max(1, requests_per_minute)),
      sleep_(std::move(sleep)),
      now_(std::move(now)) {}

void RateLimiter::acquire() {
    std::chrono::steady_clock::time_point slot;
    std::chrono::steady_clock::time_point now;
    {
        std::lock_guard lock(mutex_);
        now = now_();
        slot = first_ || next_slot_ < now ? now : next_slot_;
        first_ = false;
        next_slot_ = slot + interval_;
    }
    if (slot > now) sleep_(std::chrono::ceil<std::chrono::milliseconds>(slot - now));
}

std::string json_text_at(const json& body, std::string_view path) {
    const json* node = &body;
    std::size_t i = 0;
    auto fail = [&] { throw Error(ErrorCode::kMalformedResponse, "no text at " + std::string(path)); };
    while (i < path.size()) {
        if (path[i] == '.') {
            ++i;
            continue;
        }
        if (path[i] == '[') {
            const auto close = path.find(']', i);
            if (close == std::string_view::npos) fail();
            std::size_t index = 0;
            for (auto k = i + 1; k < close; ++k) {
                if (!std::isdigit(static_cast<unsigned char>(path[k]))) fail();
                index = index * 10 + static_cast<std::size_t>(path[k] - '0');
            }
            if (!node->is_array() || index >= node->size()) fail();
            node = &(*node)[index];
            i = close + 1;
            continue;
        }
        auto end = path.find_first_of(".[", i);
        if (end == std::string_view::npos) end = path.size();
        const std::string key(path.substr(i, end - i));
        if (!node->is_object() || !node->contains(key)) fail();
        node = &(*node)[key];
        i = end;
    }
    if (!node->is_string()) fail();
    return node->get<std::string>();
}

namespace {

std::string complete_fixture(const Prompt& prompt, const CompletionConfig& config) {
    json fixtures;
    try {
        fixtures = json::parse(io::read_file(config.fixture_path));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::kInvalidConfig, "fixture file " + config.fixture_path.string() + ": " + e.what());
    }
    if (!fixtures.is_object() || !fixtures.contains(prompt.corpus_fingerprint) ||
        !fixtures[prompt.corpus_fingerprint].is_string()) {
        throw Error(ErrorCode::kFixtureMiss, "no completion for fingerprint " + prompt.corpus_fingerprint);
    }
    return fixtures[prompt.corpus_fingerprint].get<std::string>();
}

std::string complete_live(const Prompt& prompt, const CompletionConfig& config, const CompletionDeps& deps) {
    std::unique_ptr<HttpTransport> owned;
    HttpTransport* transport = deps.transport;
    if (transport == nullptr) {
        owned = make_http_transport();
        transport = owned.get();
    }
    if (deps.limiter != nullptr) deps.limiter->acquire();

    HttpRequest request;
    request.method = "POST";
    request.url = config.endpoint_url;
    request.content_type = "application/json";
    if (!config.api_key.empty()) request.headers.emplace_back("Authorization", "Bearer " + config.api_key);
    request.body = json{{"model", config.model_name},
                        {"prompt", prompt.text},
                        {"max_tokens", config.max_output_tokens},
                        {"temperature", config.temperature}}
                       .dump();

    const auto response =
        send_with_retry(*transport, request, deps.retry, deps.sleep ? deps.sleep : real_sleeper());
    if (response.status == 401 || response.status == 403) {
        throw Error(ErrorCode::kAuthError, redact_url(config.endpoint_url) + " rejected the credentials (HTTP " +
                                               std::to_string(response.status) + ")");
    }
    if (response.status < 200 || response.status >= 300) {
        throw Error(ErrorCode::kNetworkError,
                    redact_url(config.endpoint_url) + " returned HTTP " + std::to_string(response.status));
    }
    json body;
    try {
        body = json::parse(response.body);
    } catch (const json::exception&) {
        throw Error(ErrorCode::kMalformedResponse, redact_url(config.endpoint_url) + " returned non-JSON body");
    }
    return json_text_at(body, config.response_text_path);
}

}  // namespace

std::string complete(const Prompt& prompt, const CompletionConfig& config, const CompletionDeps& deps) {
    config.validate();
    const auto raw = config.mode == CompletionMode::kFixture ? complete_fixture(prompt, config)
                                                             : complete_live(prompt, config, deps);
    auto text = trim(raw);
    if (text.empty()) throw Error(ErrorCode::kEmptyCompletion, "completion for " + prompt.corpus_fingerprint + " is empty");
    // Fixture text is canned output; return it untouched.
    return config.mode == CompletionMode::kFixture ? raw : text;
}

Summary summarize_abstractive(const ApiCorpus& corpus, const CompletionConfig& config, const CompletionDeps& deps) {
    if (corpus.sentences.empty()) throw Error(ErrorCode::kEmptyCorpus, "no sentences for " + corpus.api_key);
    const auto prompt = build_prompt(corpus, config.prompt_char_cap);
    Summary summary;
    summary.api_key = corpus.api_key;
    summary.method = SummaryMethod::kAbstractive;
    summary.text = complete(prompt, config, deps);
    for (const auto& s : corpus.sentences) summary.sentences.push_back({s.answer_id, s.index, std::nullopt});
    summary.params = config.public_json();
    return summary;
}

}  // namespace apisum
