#include "apisum/corpus.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_map>

#include "apisum/error.hpp"
#include "apisum/html.hpp"
#include "apisum/io.hpp"

namespace apisum {

using nlohmann::json;

namespace {

// Placeholder for inline code span k: kOpen + decimal k + kClose.
constexpr char kOpen = '\x01';
constexpr char kClose = '\x02';

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool is_abbreviation(std::string_view word) {
    static constexpr std::string_view kAbbrev[] = {
        "e.g.", "i.e.", "etc.", "vs.", "cf.", "eg.", "ie.", "viz.",
        "approx.", "fig.", "mr.", "mrs.", "ms.", "dr.", "no.", "al."};
    std::string lower(word);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return std::find(std::begin(kAbbrev), std::end(kAbbrev), lower) != std::end(kAbbrev);
}

struct Block {
    std::string text;  // with placeholders
};

class Segmenter {
public:
    explicit Segmenter(std::string_view body) {
        for (const auto& piece : html::scan(body)) {
            switch (piece.kind) {
                case html::PieceKind::kText:
                    if (!piece.in_pre) append_text(html::decode_entities(piece.raw));
                    break;
                case html::PieceKind::kMarkup:
                    if (html::is_block_tag(piece.tag_name)) flush();
                    break;
                case html::PieceKind::kCodeSpan:
                    if (piece.in_pre) {
                        flush();
                    } else {
                        spans_.emplace(piece.span_ordinal, html::decode_entities(piece.raw));
                        current_ += kOpen;
                        current_ += std::to_string(piece.span_ordinal);
                        current_ += kClose;
                    }
                    break;
            }
        }
        flush();
    }

    std::vector<Sentence> sentences() const {
        std::vector<Sentence> out;
        for (const auto& block : blocks_) split_block(block, out);
        return out;
    }

private:
    void append_text(const std::string& text) {
        for (const char c : text) {
            // Control characters would collide with placeholders.
            const auto u = static_cast<unsigned char>(c);
            current_ += (u < 0x20 && !is_space(c)) ? ' ' : c;
        }
    }

    void flush() {
        std::string collapsed;
        bool pending_space = false;
        for (const char c : current_) {
            if (is_space(c)) {
                pending_space = !collapsed.empty();
                continue;
            }
            if (pending_space) collapsed += ' ';
            pending_space = false;
            collapsed += c;
        }
        if (!collapsed.empty()) blocks_.push_back({std::move(collapsed)});
        current_.clear();
    }

    const std::string& span_text_at(std::string_view text, std::size_t pos) const {
        std::size_t ordinal = 0;
        for (std::size_t i = pos + 1; i < text.size() && text[i] != kClose; ++i) {
            ordinal = ordinal * 10 + static_cast<std::size_t>(text[i] - '0');
        }
        return spans_.at(ordinal);
    }

    // A sentence may start with an uppercase letter or digit; an inline span
    // counts by its own first character.
    bool starts_sentence(std::string_view text, std::size_t pos) const {
        if (pos >= text.size()) return false;
        char c = text[pos];
        if (c == kOpen) {
            const auto& span = span_text_at(text, pos);
            if (span.empty()) return false;
            c = span.front();
        }
        const auto u = static_cast<unsigned char>(c);
        return std::isupper(u) || std::isdigit(u);
    }

    void split_block(const Block& block, std::vector<Sentence>& out) const {
        const std::string_view text = block.text;
        std::size_t start = 0;
        for (std::size_t i = 0; i < text.size(); ++i) {
            const char c = text[i];
            if (c != '.' && c != '!' && c != '?') continue;
            if (i + 1 >= text.size() || text[i + 1] != ' ' || !starts_sentence(text, i + 2)) continue;
            if (c == '.') {
                const auto word_start = text.rfind(' ', i);
                const auto word = text.substr(word_start == std::string_view::npos ? 0 : word_start + 1,
                                              i + 1 - (word_start == std::string_view::npos ? 0 : word_start + 1));
                if (is_abbreviation(word)) continue;
            }
            emit(text.substr(start, i + 1 - start), out);
            start = i + 2;
        }
        if (start < text.size()) emit(text.substr(start), out);
    }

    void emit(std::string_view raw, std::vector<Sentence>& out) const {
        Sentence sentence;
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if (raw[i] != kOpen) {
                sentence.text += raw[i];
                continue;
            }
            std::size_t ordinal = 0;
            std::size_t j = i + 1;
            for (; j < raw.size() && raw[j] != kClose; ++j) {
                ordinal = ordinal * 10 + static_cast<std::size_t>(raw[j] - '0');
            }
            sentence.text += spans_.at(ordinal);
            sentence.span_ordinals.push_back(ordinal);
            i = j;
        }
        const auto first = sentence.text.find_first_not_of(" \t\r\n\f\v");
        if (first == std::string::npos) return;
        const auto last = sentence.text.find_last_not_of(" \t\r\n\f\v");
        sentence.text = sentence.text.substr(first, last - first + 1);
        out.push_back(std::move(sentence));
    }

    std::string current_;
    std::vector<Block> blocks_;
    std::unordered_map<std::size_t, std::string> spans_;
};

}  // namespace

std::vector<Sentence> segment_with_spans(std::string_view body_html) {
    return Segmenter(body_html).sentences();
}

std::vector<std::string> segment_sentences(std::string_view body_html) {
    std::vector<std::string> out;
    for (auto& s : segment_with_spans(body_html)) out.push_back(std::move(s.text));
    return out;
}

std::vector<std::string> role_names(RoleSet roles) {
    std::vector<std::string> names;
    if (roles & kFirst) names.emplace_back("FIRST");
    if (roles & kPrevious) names.emplace_back("PREVIOUS");
    if (roles & kContaining) names.emplace_back("CONTAINING");
    if (roles & kNext) names.emplace_back("NEXT");
    return names;
}

RoleSet roles_from_names(const std::vector<std::string>& names) {
    RoleSet roles = 0;
    for (const auto& n : names) {
        if (n == "FIRST") roles |= kFirst;
        else if (n == "PREVIOUS") roles |= kPrevious;
        else if (n == "CONTAINING") roles |= kContaining;
        else if (n == "NEXT") roles |= kNext;
        else throw Error(ErrorCode::kInvalidConfig, "unknown sentence role " + n);
    }
    return roles;
}

std::map<std::size_t, RoleSet> select_context(std::size_t sentence_count, std::size_t mention_index) {
    if (mention_index >= sentence_count) {
        throw Error(ErrorCode::kIndexOutOfRange, "mention at sentence " + std::to_string(mention_index) +
                                                     " of " + std::to_string(sentence_count));
    }
    std::map<std::size_t, RoleSet> picked;
    picked[0] |= kFirst;
    if (mention_index > 0) picked[mention_index - 1] |= kPrevious;
    picked[mention_index] |= kContaining;
    if (mention_index + 1 < sentence_count) picked[mention_index + 1] |= kNext;
    return picked;
}

CorpusMap build_corpora(std::span<const Answer> answers, std::span<const ApiMention> mentions,
                        std::int64_t threshold) {
    std::unordered_map<std::int64_t, const Answer*> by_id;
    for (const auto& a : answers) by_id.emplace(a.id, &a);

    std::unordered_map<std::int64_t, std::vector<std::string>> sentence_cache;
    // api_key -> (answer_id, index) -> roles
    std::map<std::string, std::map<std::pair<std::int64_t, std::size_t>, RoleSet>> selections;
    std::map<std::string, std::size_t> mention_counts;

    for (const auto& m : mentions) {
        const auto it = by_id.find(m.answer_id);
        if (it == by_id.end() || it->second->score < threshold) continue;

        auto cached = sentence_cache.find(m.answer_id);
        if (cached == sentence_cache.end()) {
            cached = sentence_cache.emplace(m.answer_id, segment_sentences(it->second->body_html)).first;
        }
        auto& picked = selections[m.api_key];
        for (const auto& [index, roles] : select_context(cached->second.size(), m.sentence_index)) {
            picked[{m.answer_id, index}] |= roles;
        }
        ++mention_counts[m.api_key];
    }

    CorpusMap corpora;
    for (const auto& [key, picked] : selections) {
        ApiCorpus corpus;
        corpus.api_key = key;
        corpus.mention_count = mention_counts[key];
        for (const auto& [where, roles] : picked) {
            corpus.sentences.push_back({where.first, where.second, sentence_cache.at(where.first)[where.second], roles});
            corpus.answer_ids.insert(where.first);
        }
        corpora.emplace(key, std::move(corpus));
    }
    return corpora;
}

json to_json(const ApiCorpus& corpus) {
    json sentences = json::array();
    for (const auto& s : corpus.sentences) {
        sentences.push_back(
            {{"answer_id", s.answer_id}, {"index", s.index}, {"roles", role_names(s.roles)}, {"text", s.text}});
    }
    return json{{"api_key", corpus.api_key},
                {"mention_count", corpus.mention_count},
                {"answer_ids", corpus.answer_ids},
                {"sentences", std::move(sentences)}};
}

ApiCorpus corpus_from_json(const json& j) {
    ApiCorpus corpus;
    corpus.api_key = j.at("api_key").get<std::string>();
    corpus.mention_count = j.at("mention_count").get<std::size_t>();
    corpus.answer_ids = j.at("answer_ids").get<std::set<std::int64_t>>();
    for (const auto& s : j.at("sentences")) {
        corpus.sentences.push_back({s.at("answer_id").get<std::int64_t>(), s.at("index").get<std::size_t>(),
                                    s.at("text").get<std::string>(),
                                    roles_from_names(s.at("roles").get<std::vector<std::string>>())});
    }
    return corpus;
}

std::string write_corpus_store(const CorpusMap& corpora) {
    std::string out;
    for (const auto& [key, corpus] : corpora) out += to_json(corpus).dump() + "\n";
    return out;
}

CorpusMap read_corpus_store(const std::filesystem::path& path) {
    CorpusMap corpora;
    io::for_each_line(path, [&](std::string_view line, std::size_t number) {
        if (line.empty()) return;
        try {
            auto corpus = corpus_from_json(json::parse(line));
            auto key = corpus.api_key;
            corpora.insert_or_assign(std::move(key), std::move(corpus));
        } catch (const json::exception& e) {
            throw Error(ErrorCode::kIoError,
                        path.string() + ":" + std::to_string(number) + ": bad corpus record: " + e.what());
        }
    });
    return corpora;
}

}  // namespace apisum
