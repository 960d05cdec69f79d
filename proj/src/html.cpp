#include "apisum/html.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>

namespace apisum::html {

namespace {

void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

// Decodes the entity body between '&' and ';'. Returns false if unrecognized.
bool decode_one(std::string_view name, std::string& out) {
    if (name == "lt") return out += '<', true;
    if (name == "gt") return out += '>', true;
    if (name == "amp") return out += '&', true;
    if (name == "quot") return out += '"', true;
    if (name == "apos") return out += '\'', true;
    if (name == "nbsp") return append_utf8(out, 0xA0), true;
    if (name.size() < 2 || name[0] != '#') return false;

    std::uint32_t cp = 0;
    const bool hex = name[1] == 'x' || name[1] == 'X';
    const auto digits = name.substr(hex ? 2 : 1);
    if (digits.empty() || digits.size() > 8) return false;
    for (const char c : digits) {
        const auto u = static_cast<unsigned char>(c);
        if (hex && std::isxdigit(u)) {
            cp = cp * 16 + static_cast<std::uint32_t>(std::isdigit(u) ? u - '0' : std::tolower(u) - 'a' + 10);
        } else if (!hex && std::isdigit(u)) {
            cp = cp * 10 + static_cast<std::uint32_t>(u - '0');
        } else {
            return false;
        }
    }
    append_utf8(out, cp);
    return true;
}

bool starts_with_ci(std::string_view text, std::size_t pos, std::string_view prefix) {
    if (pos + prefix.size() > text.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(text[pos + i])) != prefix[i]) return false;
    }
    return true;
}

// Finds `</code` followed by optional whitespace and '>'; returns its start or npos.
std::size_t find_code_close(std::string_view body, std::size_t from, std::size_t& tag_end) {
    for (auto pos = body.find('<', from); pos != std::string_view::npos; pos = body.find('<', pos + 1)) {
        if (!starts_with_ci(body, pos, "</code")) continue;
        auto i = pos + 6;
        while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i]))) ++i;
        if (i < body.size() && body[i] == '>') {
            tag_end = i + 1;
            return pos;
        }
    }
    return std::string_view::npos;
}

}  // namespace

std::string decode_entities(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] != '&') {
            out += text[i++];
            continue;
        }
        // Entity names are short and alphanumeric (plus '#').
        std::size_t j = i + 1;
        while (j < text.size() && j - i <= 10 &&
               (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '#')) {
            ++j;
        }
        if (j < text.size() && text[j] == ';' && decode_one(text.substr(i + 1, j - i - 1), out)) {
            i = j + 1;
        } else {
            out += text[i++];
        }
    }
    return out;
}

bool is_block_tag(std::string_view name) {
    static constexpr std::string_view kBlock[] = {
        "p",  "li", "br", "pre", "div", "ul", "ol", "h1", "h2",    "h3",    "h4",
        "h5", "h6", "hr", "tr",  "td",  "th", "dl", "dt", "dd", "table", "blockquote"};
    for (const auto b : kBlock) {
        if (b == name) return true;
    }
    return false;
}

std::vector<Piece> scan(std::string_view body) {
    std::vector<Piece> pieces;
    std::size_t text_start = 0;
    std::size_t i = 0;
    std::size_t ordinal = 0;
    int pre_depth = 0;

    auto flush_text = [&](std::size_t end) {
        if (end > text_start) {
            Piece p;
            p.kind = PieceKind::kText;
            p.raw = body.substr(text_start, end - text_start);
            p.in_pre = pre_depth > 0;
            pieces.push_back(std::move(p));
        }
    };

    while (i < body.size()) {
        if (body[i] != '<' || i + 1 >= body.size()) {
            ++i;
            continue;
        }
        const char next = body[i + 1];
        const bool tag_like = std::isalpha(static_cast<unsigned char>(next)) || next == '/' || next == '!' || next == '?';
        if (!tag_like) {
            ++i;
            continue;
        }
        std::size_t end;
        if (body.compare(i, 4, "<!--") == 0) {
            const auto close = body.find("-->", i + 4);
            end = close == std::string_view::npos ? std::string_view::npos : close + 3;
        } else {
            const auto close = body.find('>', i + 1);
            end = close == std::string_view::npos ? std::string_view::npos : close + 1;
        }
        if (end == std::string_view::npos) break;  // dangling '<' is text

        flush_text(i);
        Piece tag;
        tag.kind = PieceKind::kMarkup;
        tag.raw = body.substr(i, end - i);
        std::size_t n = i + 1;
        if (n < end && body[n] == '/') {
            tag.closing = true;
            ++n;
        }
        while (n < end && std::isalnum(static_cast<unsigned char>(body[n]))) {
            tag.tag_name += static_cast<char>(std::tolower(static_cast<unsigned char>(body[n])));
            ++n;
        }
        if (tag.tag_name == "pre") pre_depth = tag.closing ? std::max(0, pre_depth - 1) : pre_depth + 1;
        tag.in_pre = pre_depth > 0;
        const bool opens_code = tag.tag_name == "code" && !tag.closing && tag.raw.size() >= 2 &&
                                tag.raw[tag.raw.size() - 2] != '/';
        pieces.push_back(std::move(tag));
        i = end;
        text_start = i;

        if (opens_code) {
            std::size_t close_end = 0;
            const auto close = find_code_close(body, i, close_end);
            Piece span;
            span.kind = PieceKind::kCodeSpan;
            span.span_ordinal = ordinal++;
            span.in_pre = pre_depth > 0;
            if (close == std::string_view::npos) {
                span.raw = body.substr(i);
                span.unterminated = true;
                pieces.push_back(std::move(span));
                i = text_start = body.size();
                break;
            }
            span.raw = body.substr(i, close - i);
            pieces.push_back(std::move(span));
            Piece closing;
            closing.kind = PieceKind::kMarkup;
            closing.raw = body.substr(close, close_end - close);
            closing.tag_name = "code";
            closing.closing = true;
            closing.in_pre = pre_depth > 0;
            pieces.push_back(std::move(closing));
            i = text_start = close_end;
        }
    }
    flush_text(body.size());
    return pieces;
}

}  // namespace apisum::html
