#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "apisum/extract.hpp"
#include "apisum/ingest.hpp"

namespace apisum {

struct Sentence {
    std::string text;
    std::vector<std::size_t> span_ordinals;  // inline code spans restored into `text`
};

/// Rule-based segmentation of an answer body. Inline code spans are protected
/// by placeholders so dotted identifiers never split a sentence; `<pre>` blocks
/// become boundaries and contribute no text.
std::vector<Sentence> segment_with_spans(std::string_view body_html);

std::vector<std::string> segment_sentences(std::string_view body_html);

/// Role flags of a context sentence.
enum Role : std::uint8_t {
    kFirst = 1 << 0,
    kPrevious = 1 << 1,
    kContaining = 1 << 2,
    kNext = 1 << 3,
};

using RoleSet = std::uint8_t;

std::vector<std::string> role_names(RoleSet roles);
RoleSet roles_from_names(const std::vector<std::string>& names);

/// Context sentences for a mention: the first sentence, the containing one,
/// and its neighbours. Throws INDEX_OUT_OF_RANGE unless mention_index < sentence_count.
std::map<std::size_t, RoleSet> select_context(std::size_t sentence_count, std::size_t mention_index);

struct SentenceRecord {
    std::int64_t answer_id = 0;
    std::size_t index = 0;
    std::string text;
    RoleSet roles = 0;

    bool operator==(const SentenceRecord&) const = default;
};

struct ApiCorpus {
    std::string api_key;
    std::vector<SentenceRecord> sentences;  // ascending (answer_id, index), unique
    std::size_t mention_count = 0;
    std::set<std::int64_t> answer_ids;

    bool operator==(const ApiCorpus&) const = default;
};

using CorpusMap = std::map<std::string, ApiCorpus>;

/// Drops mentions from answers scoring below `threshold` and merges the
/// remaining context selections per API key.
CorpusMap build_corpora(std::span<const Answer> answers, std::span<const ApiMention> mentions,
                        std::int64_t threshold);

nlohmann::json to_json(const ApiCorpus& corpus);
ApiCorpus corpus_from_json(const nlohmann::json& j);

/// One corpus per line, ordered by api_key, keys sorted.
std::string write_corpus_store(const CorpusMap& corpora);
CorpusMap read_corpus_store(const std::filesystem::path& path);

}  // namespace apisum
