#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace apisum::html {

/// Decodes named (&lt; &gt; &amp; &quot; &apos; &nbsp;) and numeric
/// (&#NNN; &#xHH;) entities. Unknown or unterminated entities are kept as-is.
std::string decode_entities(std::string_view text);

enum class PieceKind { kText, kMarkup, kCodeSpan };

/// One lexical piece of a post body. Concatenating `raw` over all pieces
/// reproduces the input exactly.
struct Piece {
    PieceKind kind = PieceKind::kText;
    std::string_view raw;
    std::string tag_name;  // lowercase, markup only
    bool closing = false;  // markup only
    std::size_t span_ordinal = 0;
    bool in_pre = false;
    bool unterminated = false;
};

/// Splits a body into text, tags and `<code>` span contents in document order.
/// Span contents are taken verbatim up to the next `</code>`; an unclosed
/// span runs to the end of input.
std::vector<Piece> scan(std::string_view body);

/// Tags that force a sentence boundary.
bool is_block_tag(std::string_view lowercase_name);

}  // namespace apisum::html
