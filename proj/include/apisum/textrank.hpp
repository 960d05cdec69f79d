#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "apisum/corpus.hpp"
#include "apisum/rank_kernels.hpp"
#include "apisum/summary.hpp"

namespace apisum {

struct SentenceNode {
    std::size_t corpus_position = 0;
    std::vector<std::string> content_tokens;  // in sentence order, duplicates kept
    std::size_t raw_length = 0;               // tokens before stopword removal
};

struct RankParams {
    double damping = 0.85;
    double tolerance = 1e-4;
    int max_iterations = 100;
    int budget_words = 100;
    int budget_sentences = 3;

    /// Throws INVALID_CONFIG for out-of-range fields.
    void validate() const;
    nlohmann::json to_json() const;
};

bool is_stopword(std::string_view lowercase_token);

/// True for words that look like code: dotted chains, calls "x()", snake_case
/// or camelCase identifiers. Such tokens are kept whole and keep their case.
bool is_code_token(std::string_view word);

/// Tokenizes and removes stopwords. Throws EMPTY_AFTER_CLEANING when no
/// content token remains.
SentenceNode preprocess(std::string_view sentence_text);

/// Same as `preprocess` but reports an empty result as nullopt.
std::optional<SentenceNode> try_preprocess(std::string_view sentence_text);

/// Shared distinct content tokens over ln(len_a) + ln(len_b); 0 when either
/// the overlap or the denominator is non-positive.
double similarity(const SentenceNode& a, const SentenceNode& b);

/// Undirected weighted graph on dense storage; absent edges have weight 0.
class SentenceGraph {
public:
    SentenceGraph() = default;
    explicit SentenceGraph(std::size_t node_count);

    std::size_t size() const { return n_; }
    double weight(std::size_t i, std::size_t j) const { return weights_[i * n_ + j]; }

    /// Sets w(i,j) = w(j,i). Throws std::invalid_argument on self-edges or negative weights.
    void set_weight(std::size_t i, std::size_t j, double w);

    std::size_t edge_count() const;
    std::span<const double> weights() const { return weights_; }

    std::vector<SentenceNode> nodes;

private:
    std::size_t n_ = 0;
    std::vector<double> weights_;
};

/// Nodes for every corpus sentence, edges weighted by `similarity`.
SentenceGraph build_graph(const ApiCorpus& corpus);

struct RankResult {
    std::vector<double> scores;
    int iterations = 0;
    bool converged = false;
};

/// Synchronous (Jacobi) weighted PageRank iteration from uniform 1.0 scores.
RankResult rank(const SentenceGraph& graph, const RankParams& params,
                const kernels::RankKernels& kernels = kernels::active());

/// Row-normalized transition matrix: T[j][i] = w(j,i) / sum_k w(j,k).
std::vector<double> transition_matrix(const SentenceGraph& graph);

/// Greedy top-score selection under the sentence and word budgets, reported
/// in corpus order. Throws EMPTY_CORPUS.
Summary select_summary(const ApiCorpus& corpus, const RankResult& ranked, const RankParams& params);

Summary summarize_extractive(const ApiCorpus& corpus, const RankParams& params);

std::size_t word_count(std::string_view text);

}  // namespace apisum
