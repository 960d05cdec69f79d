#include "apisum/textrank.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "apisum/error.hpp"
#include "apisum/extract.hpp"

namespace apisum {

void RankParams::validate() const {
    if (!(damping > 0.0 && damping < 1.0)) throw Error(ErrorCode::kInvalidConfig, "damping must be in (0,1)");
    if (!(tolerance > 0.0)) throw Error(ErrorCode::kInvalidConfig, "tolerance must be positive");
    if (max_iterations < 1) throw Error(ErrorCode::kInvalidConfig, "max_iterations must be >= 1");
    if (budget_words < 1) throw Error(ErrorCode::kInvalidConfig, "budget_words must be >= 1");
    if (budget_sentences < 1) throw Error(ErrorCode::kInvalidConfig, "budget_sentences must be >= 1");
}

nlohmann::json RankParams::to_json() const {
    return {{"damping", damping},
            {"tolerance", tolerance},
            {"max_iterations", max_iterations},
            {"budget_words", budget_words},
            {"budget_sentences", budget_sentences}};
}

bool is_stopword(std::string_view token) {
    // English stopword list from NLTK, minus the apostrophe forms the
    // tokenizer can never produce.
    static constexpr std::string_view kStopwords[] = {
        "i",       "me",      "my",       "myself",     "we",     "our",     "ours",    "ourselves", "you",
        "your",    "yours",   "yourself", "yourselves", "he",     "him",     "his",     "himself",   "she",
        "her",     "hers",    "herself",  "it",         "its",    "itself",  "they",    "them",      "their",
        "theirs",  "themselves", "what",  "which",      "who",    "whom",    "this",    "that",      "these",
        "those",   "am",      "is",       "are",        "was",    "were",    "be",      "been",      "being",
        "have",    "has",     "had",      "having",     "do",     "does",    "did",     "doing",     "a",
        "an",      "the",     "and",      "but",        "if",     "or",      "because", "as",        "until",
        "while",   "of",      "at",       "by",         "for",    "with",    "about",   "against",   "between",
        "into",    "through", "during",   "before",     "after",  "above",   "below",   "to",        "from",
        "up",      "down",    "in",       "out",        "on",     "off",     "over",    "under",     "again",
        "further", "then",    "once",     "here",       "there",  "when",    "where",   "why",       "how",
        "all",     "any",     "both",     "each",       "few",    "more",    "most",    "other",     "some",
        "such",    "no",      "nor",      "not",        "only",   "own",     "same",    "so",        "than",
        "too",     "very",    "s",        "t",          "can",    "will",    "just",    "don",       "should",
        "now",     "d",       "ll",       "m",          "o",      "re",      "ve",      "y",         "ain",
        "aren",    "couldn",  "didn",     "doesn",      "hadn",   "hasn",    "haven",   "isn",       "ma",
        "mightn",  "mustn",   "needn",    "shan",       "shouldn", "wasn",   "weren",   "won",       "wouldn"};
    return std::find(std::begin(kStopwords), std::end(kStopwords), token) != std::end(kStopwords);
}

bool is_code_token(std::string_view word) {
    if (!is_identifier_chain(word)) return false;
    if (word.size() >= 2 && word.substr(word.size() - 2) == "()") return true;
    if (word.find('_') != std::string_view::npos) return true;
    for (std::size_t i = 1; i < word.size(); ++i) {
        if (std::islower(static_cast<unsigned char>(word[i - 1])) && std::isupper(static_cast<unsigned char>(word[i]))) {
            return true;
        }
    }
    // Dotted chains count unless every segment is a single letter ("e.g").
    if (word.find('.') == std::string_view::npos) return false;
    std::size_t seg_len = 0;
    for (const char c : word) {
        if (c == '.') {
            if (seg_len >= 2) return true;
            seg_len = 0;
        } else {
            ++seg_len;
        }
    }
    return seg_len >= 2;
}

namespace {

struct Tokens {
    std::vector<std::string> content;
    std::size_t raw_length = 0;
};

std::string_view strip_wrapping(std::string_view w) {
    while (!w.empty() && std::string_view("([{\"'<").find(w.front()) != std::string_view::npos) w.remove_prefix(1);
    while (!w.empty()) {
        const char c = w.back();
        if (std::string_view(".,;:!?\"']}>").find(c) != std::string_view::npos) {
            w.remove_suffix(1);
        } else if (c == ')' && std::count(w.begin(), w.end(), ')') > std::count(w.begin(), w.end(), '(')) {
            w.remove_suffix(1);
        } else {
            break;
        }
    }
    return w;
}

Tokens tokenize(std::string_view text) {
    Tokens out;
    auto add = [&](std::string token, bool code) {
        ++out.raw_length;
        if (code || !is_stopword(token)) out.content.push_back(std::move(token));
    };

    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t j = i;
        while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
        if (j == i) break;
        const auto word = text.substr(i, j - i);
        i = j;

        const auto core = strip_wrapping(word);
        if (is_code_token(core)) {
            add(std::string(core), true);
            continue;
        }
        std::string current;
        for (const char c : word) {
            const auto u = static_cast<unsigned char>(c);
            if (std::isalnum(u) || u >= 0x80) {
                current += static_cast<char>(u < 0x80 ? std::tolower(u) : u);
            } else if (!current.empty()) {
                add(std::move(current), false);
                current.clear();
            }
        }
        if (!current.empty()) add(std::move(current), false);
    }
    return out;
}

}  // namespace

std::optional<SentenceNode> try_preprocess(std::string_view sentence_text) {
    auto tokens = tokenize(sentence_text);
    if (tokens.content.empty()) return std::nullopt;
    SentenceNode node;
    node.content_tokens = std::move(tokens.content);
    node.raw_length = tokens.raw_length;
    return node;
}

SentenceNode preprocess(std::string_view sentence_text) {
    auto node = try_preprocess(sentence_text);
    if (!node) throw Error(ErrorCode::kEmptyAfterCleaning, "no content tokens in sentence");
    return std::move(*node);
}

double similarity(const SentenceNode& a, const SentenceNode& b) {
    if (a.raw_length == 0 || b.raw_length == 0) return 0.0;
    const double denom = std::log(static_cast<double>(a.raw_length)) + std::log(static_cast<double>(b.raw_length));
    if (denom <= 0.0) return 0.0;

    std::vector<std::string_view> left(a.content_tokens.begin(), a.content_tokens.end());
    std::vector<std::string_view> right(b.content_tokens.begin(), b.content_tokens.end());
    std::sort(left.begin(), left.end());
    left.erase(std::unique(left.begin(), left.end()), left.end());
    std::sort(right.begin(), right.end());
    right.erase(std::unique(right.begin(), right.end()), right.end());

    std::size_t shared = 0;
    auto l = left.begin();
    auto r = right.begin();
    while (l != left.end() && r != right.end()) {
        if (*l < *r) {
            ++l;
        } else if (*r < *l) {
            ++r;
        } else {
            ++shared;
            ++l;
            ++r;
        }
    }
    return shared == 0 ? 0.0 : static_cast<double>(shared) / denom;
}

SentenceGraph::SentenceGraph(std::size_t node_count) : nodes(node_count), n_(node_count), weights_(node_count * node_count, 0.0) {
    for (std::size_t i = 0; i < n_; ++i) nodes[i].corpus_position = i;
}

void SentenceGraph::set_weight(std::size_t i, std::size_t j, double w) {
    if (i >= n_ || j >= n_) throw std::invalid_argument("set_weight: node out of range");
    if (i == j) throw std::invalid_argument("set_weight: self-edges are not allowed");
    if (!(w >= 0.0)) throw std::invalid_argument("set_weight: weight must be non-negative");
    weights_[i * n_ + j] = w;
    weights_[j * n_ + i] = w;
}

std::size_t SentenceGraph::edge_count() const {
    std::size_t count = 0;
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = i + 1; j < n_; ++j) count += weights_[i * n_ + j] > 0.0 ? 1 : 0;
    }
    return count;
}

SentenceGraph build_graph(const ApiCorpus& corpus) {
    SentenceGraph graph(corpus.sentences.size());
    for (std::size_t i = 0; i < corpus.sentences.size(); ++i) {
        auto tokens = tokenize(corpus.sentences[i].text);
        graph.nodes[i].content_tokens = std::move(tokens.content);
        graph.nodes[i].raw_length = std::max<std::size_t>(1, tokens.raw_length);
    }
    for (std::size_t i = 0; i < graph.size(); ++i) {
        for (std::size_t j = i + 1; j < graph.size(); ++j) {
            const double w = similarity(graph.nodes[i], graph.nodes[j]);
            if (w > 0.0) graph.set_weight(i, j, w);
        }
    }
    return graph;
}

std::vector<double> transition_matrix(const SentenceGraph& graph) {
    const auto n = graph.size();
    std::vector<double> t(graph.weights().begin(), graph.weights().end());
    for (std::size_t j = 0; j < n; ++j) {
        double out = 0.0;
        for (std::size_t k = 0; k < n; ++k) out += t[j * n + k];
        if (out <= 0.0) continue;
        for (std::size_t k = 0; k < n; ++k) t[j * n + k] /= out;
    }
    return t;
}

RankResult rank(const SentenceGraph& graph, const RankParams& params, const kernels::RankKernels& k) {
    params.validate();
    RankResult result;
    const auto n = graph.size();
    if (n == 0) {
        result.converged = true;
        return result;
    }
    const auto transition = transition_matrix(graph);
    std::vector<double> current(n, 1.0);
    std::vector<double> next(n, 0.0);
    for (int iter = 1; iter <= params.max_iterations; ++iter) {
        kernels::propagate(k, transition, current, params.damping, next);
        const double change = kernels::max_abs_diff(k, current, next);
        current.swap(next);
        result.iterations = iter;
        if (change < params.tolerance) {
            result.converged = true;
            break;
        }
    }
    result.scores = std::move(current);
    return result;
}

std::size_t word_count(std::string_view text) {
    std::size_t count = 0;
    bool in_word = false;
    for (const char c : text) {
        const bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
        if (!space && !in_word) ++count;
        in_word = !space;
    }
    return count;
}

Summary select_summary(const ApiCorpus& corpus, const RankResult& ranked, const RankParams& params) {
    if (corpus.sentences.empty()) throw Error(ErrorCode::kEmptyCorpus, "no sentences for " + corpus.api_key);
    if (ranked.scores.size() != corpus.sentences.size()) {
        throw std::invalid_argument("select_summary: one score per corpus sentence required");
    }

    std::vector<std::size_t> order(corpus.sentences.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (ranked.scores[a] != ranked.scores[b]) return ranked.scores[a] > ranked.scores[b];
        return a < b;
    });

    std::vector<std::size_t> chosen;
    std::size_t words = 0;
    for (const auto pos : order) {
        if (chosen.size() >= static_cast<std::size_t>(params.budget_sentences)) break;
        const auto w = word_count(corpus.sentences[pos].text);
        if (!chosen.empty() && words + w > static_cast<std::size_t>(params.budget_words)) break;
        chosen.push_back(pos);
        words += w;
    }
    std::sort(chosen.begin(), chosen.end());

    Summary summary;
    summary.api_key = corpus.api_key;
    summary.method = SummaryMethod::kExtractive;
    for (const auto pos : chosen) {
        const auto& s = corpus.sentences[pos];
        if (!summary.text.empty()) summary.text += ' ';
        summary.text += s.text;
        summary.sentences.push_back({s.answer_id, s.index, ranked.scores[pos]});
    }
    summary.params = params.to_json();
    summary.converged = ranked.converged;
    summary.iterations = ranked.iterations;
    return summary;
}

Summary summarize_extractive(const ApiCorpus& corpus, const RankParams& params) {
    if (corpus.sentences.empty()) throw Error(ErrorCode::kEmptyCorpus, "no sentences for " + corpus.api_key);
    return select_summary(corpus, rank(build_graph(corpus), params), params);
}

}  // namespace apisum
