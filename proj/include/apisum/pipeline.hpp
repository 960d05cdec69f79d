#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "apisum/abstractive.hpp"
#include "apisum/ingest.hpp"
#include "apisum/textrank.hpp"

namespace apisum {

/// Flat configuration shared by all subcommands. Every key may come from the
/// JSON config file and be overridden by a flag of the same name.
struct PipelineConfig {
    std::filesystem::path store_dir = "apisum-store";
    IngestConfig ingest;
    std::filesystem::path dump_path;
    std::string api_base_url = std::string(StackExchangeClient::kDefaultBaseUrl);
    std::filesystem::path alias_map;
    ThresholdSpec threshold;
    RankParams rank;
    CompletionConfig completion;

    /// Applies one flat key. Throws INVALID_CONFIG for unknown keys or bad values.
    void apply(std::string_view key, const nlohmann::json& value);
    void apply_object(const nlohmann::json& object);

    static const std::vector<std::string>& keys();

    std::filesystem::path posts_path() const { return store_dir / "posts.jsonl"; }
    std::filesystem::path mentions_path() const { return store_dir / "mentions.jsonl"; }
    std::filesystem::path rejections_path() const { return store_dir / "rejections.json"; }
    std::filesystem::path corpus_path() const { return store_dir / "corpus.jsonl"; }
};

PipelineConfig load_pipeline_config(const std::filesystem::path& path);

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kConfig = 2;
inline constexpr int kIo = 3;
inline constexpr int kUnknownApi = 4;
}  // namespace exit_code

int cmd_ingest(const PipelineConfig& config, std::ostream& out);
int cmd_extract(const PipelineConfig& config, std::ostream& out);
int cmd_corpus(const PipelineConfig& config, std::ostream& out);
int cmd_summarize(const PipelineConfig& config, const std::string& api_key, SummaryMethod method,
                  std::ostream& out, std::ostream& err);
int cmd_stats(const PipelineConfig& config, std::size_t top_n, std::ostream& out);

struct StatsRow {
    std::string api_key;
    std::size_t mention_count = 0;
    std::size_t answer_count = 0;
    std::size_t sentence_count = 0;
};

/// Rows by descending mention count, ties by ascending key, at most `top_n`.
std::vector<StatsRow> corpus_stats(const CorpusMap& corpora, std::size_t top_n);

/// Entry point behind the `apisum` executable.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace apisum
