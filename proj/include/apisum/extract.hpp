#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "apisum/ingest.hpp"

namespace apisum {

struct CodeSpan {
    std::int64_t answer_id = 0;
    std::string raw_text;  // entity-decoded, whitespace preserved
    std::size_t ordinal = 0;
    bool unterminated = false;
    bool in_block = false;  // inside <pre>
};

/// Every `<code>` span of a body in document order, including those in `<pre>`.
std::vector<CodeSpan> extract_code_spans(std::string_view body_html, std::int64_t answer_id = 0);

struct BodyPiece {
    bool is_span = false;
    std::string text;  // entity-decoded
};

/// Decoded body as alternating markup/text and span pieces; concatenating
/// all pieces yields `html::decode_entities(body_html)`.
std::vector<BodyPiece> split_body(std::string_view body_html);

enum class RejectReason { kMultiline, kWhitespace, kTooLong, kPattern, kStoplist };

std::string_view to_string(RejectReason reason);

inline constexpr std::size_t kMaxApiTokenLength = 60;

/// ACCEPT when `rejection` is empty; otherwise the first rule that failed.
struct FilterVerdict {
    std::optional<RejectReason> rejection;

    bool accepted() const { return !rejection.has_value(); }
};

FilterVerdict filter_api_candidate(std::string_view raw_text);
inline FilterVerdict filter_api_candidate(const CodeSpan& span) { return filter_api_candidate(span.raw_text); }

/// `[A-Za-z_][A-Za-z0-9_]*` segments joined by '.', optionally ending in "()".
bool is_identifier_chain(std::string_view text);

/// Language keywords and literals that are never API names.
bool is_stop_keyword(std::string_view segment);

using AliasMap = std::map<std::string, std::string, std::less<>>;

/// Loads a JSON object of {raw_key: qualified_key}.
AliasMap load_alias_map(const std::filesystem::path& path);

/// Strips a trailing "()" and applies the alias map by exact match.
std::string normalize_api_name(std::string_view raw_token, const AliasMap& aliases = {});

struct ApiMention {
    std::string api_key;
    std::string raw_token;
    std::int64_t answer_id = 0;
    std::size_t sentence_index = 0;

    bool operator==(const ApiMention&) const = default;
};

nlohmann::json to_json(const ApiMention& m);
ApiMention mention_from_json(const nlohmann::json& j);

struct MentionReport {
    std::vector<ApiMention> mentions;
    std::map<std::string, std::size_t> rejections;  // reason name -> count
    std::size_t spans_total = 0;
    std::size_t accepted_outside_sentences = 0;  // accepted spans inside <pre> blocks

    void merge(const MentionReport& other);
};

/// Mentions for one answer: accepted spans that sit inside a segmented sentence.
MentionReport find_mentions(const Answer& answer, const AliasMap& aliases = {});

/// Mentions for a collection, ordered by (answer order, span ordinal).
MentionReport find_mentions(std::span<const Answer> answers, const AliasMap& aliases = {});

}  // namespace apisum
