#include "apisum/extract.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "apisum/corpus.hpp"
#include "apisum/error.hpp"
#include "apisum/html.hpp"
#include "apisum/io.hpp"

namespace apisum {

using nlohmann::json;

std::vector<CodeSpan> extract_code_spans(std::string_view body_html, std::int64_t answer_id) {
    std::vector<CodeSpan> spans;
    for (const auto& piece : html::scan(body_html)) {
        if (piece.kind != html::PieceKind::kCodeSpan) continue;
        CodeSpan span;
        span.answer_id = answer_id;
        span.raw_text = html::decode_entities(piece.raw);
        span.ordinal = piece.span_ordinal;
        span.unterminated = piece.unterminated;
        span.in_block = piece.in_pre;
        spans.push_back(std::move(span));
    }
    return spans;
}

std::vector<BodyPiece> split_body(std::string_view body_html) {
    std::vector<BodyPiece> out;
    for (const auto& piece : html::scan(body_html)) {
        const bool is_span = piece.kind == html::PieceKind::kCodeSpan;
        if (!is_span && !out.empty() && !out.back().is_span) {
            out.back().text += html::decode_entities(piece.raw);
        } else {
            out.push_back({is_span, html::decode_entities(piece.raw)});
        }
    }
    return out;
}

std::string_view to_string(RejectReason reason) {
    switch (reason) {
        case RejectReason::kMultiline: return "multiline";
        case RejectReason::kWhitespace: return "whitespace";
        case RejectReason::kTooLong: return "too_long";
        case RejectReason::kPattern: return "pattern";
        case RejectReason::kStoplist: return "stoplist";
    }
    return "unknown";
}

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n\f\v");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n\f\v");
    return s.substr(first, last - first + 1);
}

std::string_view strip_call_suffix(std::string_view s) {
    if (s.size() >= 2 && s.substr(s.size() - 2) == "()") s.remove_suffix(2);
    return s;
}

}  // namespace

bool is_identifier_chain(std::string_view text) {
    text = strip_call_suffix(text);
    if (text.empty()) return false;
    std::size_t i = 0;
    while (true) {
        if (i >= text.size() || !ident_start(text[i])) return false;
        ++i;
        while (i < text.size() && ident_char(text[i])) ++i;
        if (i == text.size()) return true;
        if (text[i] != '.') return false;
        ++i;
    }
}

bool is_stop_keyword(std::string_view segment) {
    // Java and Kotlin keywords plus common literals.
    static constexpr std::string_view kStop[] = {
        "abstract", "as",      "assert",     "boolean",   "break",     "byte",     "case",
        "catch",    "char",    "class",      "const",     "continue",  "default",  "do",
        "double",   "else",    "enum",       "extends",   "false",     "final",    "finally",
        "float",    "for",     "fun",        "goto",      "if",        "implements", "import",
        "in",       "instanceof", "int",     "interface", "is",        "long",     "native",
        "new",      "null",    "object",     "package",   "private",   "protected", "public",
        "return",   "short",   "static",     "strictfp",  "super",     "switch",   "synchronized",
        "this",     "throw",   "throws",     "transient", "true",      "try",      "typealias",
        "val",      "var",     "void",       "volatile",  "when",      "while",    "let",
        "nil",      "undefined", "None",     "True",      "False"};
    return std::find(std::begin(kStop), std::end(kStop), segment) != std::end(kStop);
}

FilterVerdict filter_api_candidate(std::string_view raw_text) {
    if (raw_text.find_first_of("\r\n") != std::string_view::npos) return {RejectReason::kMultiline};
    for (const char c : raw_text) {
        if (std::isspace(static_cast<unsigned char>(c))) return {RejectReason::kWhitespace};
    }
    const auto text = trim(raw_text);
    if (text.size() > kMaxApiTokenLength) return {RejectReason::kTooLong};
    if (!is_identifier_chain(text)) return {RejectReason::kPattern};
    const auto base = strip_call_suffix(text);
    const auto dot = base.rfind('.');
    const auto last = dot == std::string_view::npos ? base : base.substr(dot + 1);
    if (is_stop_keyword(last)) return {RejectReason::kStoplist};
    return {};
}

AliasMap load_alias_map(const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(io::read_file(path));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::kInvalidConfig, "alias map " + path.string() + ": " + e.what());
    }
    if (!j.is_object()) throw Error(ErrorCode::kInvalidConfig, "alias map must be a JSON object");
    AliasMap aliases;
    for (const auto& [key, value] : j.items()) {
        if (!value.is_string()) throw Error(ErrorCode::kInvalidConfig, "alias for " + key + " must be a string");
        aliases.emplace(key, value.get<std::string>());
    }
    return aliases;
}

std::string normalize_api_name(std::string_view raw_token, const AliasMap& aliases) {
    const auto key = strip_call_suffix(trim(raw_token));
    if (const auto it = aliases.find(key); it != aliases.end()) return it->second;
    return std::string(key);
}

json to_json(const ApiMention& m) {
    return json{{"api_key", m.api_key},
                {"raw_token", m.raw_token},
                {"answer_id", m.answer_id},
                {"sentence_index", m.sentence_index}};
}

ApiMention mention_from_json(const json& j) {
    ApiMention m;
    m.api_key = j.at("api_key").get<std::string>();
    m.raw_token = j.at("raw_token").get<std::string>();
    m.answer_id = j.at("answer_id").get<std::int64_t>();
    m.sentence_index = j.at("sentence_index").get<std::size_t>();
    return m;
}

void MentionReport::merge(const MentionReport& other) {
    mentions.insert(mentions.end(), other.mentions.begin(), other.mentions.end());
    for (const auto& [reason, count] : other.rejections) rejections[reason] += count;
    spans_total += other.spans_total;
    accepted_outside_sentences += other.accepted_outside_sentences;
}

MentionReport find_mentions(const Answer& answer, const AliasMap& aliases) {
    MentionReport report;
    const auto spans = extract_code_spans(answer.body_html, answer.id);
    report.spans_total = spans.size();

    const auto sentences = segment_with_spans(answer.body_html);
    std::map<std::size_t, std::size_t> sentence_of_span;
    for (std::size_t s = 0; s < sentences.size(); ++s) {
        for (const auto ordinal : sentences[s].span_ordinals) sentence_of_span.emplace(ordinal, s);
    }

    for (const auto& span : spans) {
        const auto verdict = filter_api_candidate(span);
        if (!verdict.accepted()) {
            ++report.rejections[std::string(to_string(*verdict.rejection))];
            continue;
        }
        const auto where = sentence_of_span.find(span.ordinal);
        if (where == sentence_of_span.end()) {
            ++report.accepted_outside_sentences;
            continue;
        }
        report.mentions.push_back(
            {normalize_api_name(span.raw_text, aliases), span.raw_text, answer.id, where->second});
    }
    return report;
}

MentionReport find_mentions(std::span<const Answer> answers, const AliasMap& aliases) {
    MentionReport total;
    for (const auto& answer : answers) total.merge(find_mentions(answer, aliases));
    return total;
}

}  // namespace apisum
