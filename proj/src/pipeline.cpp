#include "apisum/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ostream>

#include "apisum/corpus.hpp"
#include "apisum/error.hpp"
#include "apisum/extract.hpp"
#include "apisum/io.hpp"

namespace apisum {

using nlohmann::json;

namespace {

template <typename T>
T typed(std::string_view key, const json& value) {
    try {
        if constexpr (std::is_same_v<T, double>) {
            if (!value.is_number()) throw json::type_error::create(302, "expected a number", &value);
        } else if constexpr (std::is_integral_v<T>) {
            if (!value.is_number_integer()) throw json::type_error::create(302, "expected an integer", &value);
        }
        return value.get<T>();
    } catch (const json::exception&) {
        throw Error(ErrorCode::kInvalidConfig, "bad value for " + std::string(key) + ": " + value.dump());
    }
}

Timestamp timestamp(std::string_view key, const json& value) {
    if (value.is_number_integer()) return value.get<Timestamp>();
    if (value.is_string()) return parse_timestamp(value.get<std::string>());
    throw Error(ErrorCode::kInvalidConfig, "bad value for " + std::string(key) + ": " + value.dump());
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

}  // namespace

const std::vector<std::string>& PipelineConfig::keys() {
    static const std::vector<std::string> kKeys = {
        "store_dir",       "tag",           "date_from",         "date_to",
        "source",          "page_size",     "dump_path",         "api_base_url",
        "alias_map",       "threshold_mode", "threshold",        "damping",
        "tolerance",       "max_iterations", "budget_words",     "budget_sentences",
        "endpoint_url",    "model_name",    "max_output_tokens", "temperature",
        "completion_mode", "fixture_path",  "response_text_path", "prompt_char_cap",
        "requests_per_minute"};
    return kKeys;
}

void PipelineConfig::apply(std::string_view key, const json& v) {
    if (key == "store_dir") store_dir = typed<std::string>(key, v);
    else if (key == "tag") ingest.tag = lower(typed<std::string>(key, v));
    else if (key == "date_from") ingest.date_from = timestamp(key, v);
    else if (key == "date_to") ingest.date_to = timestamp(key, v);
    else if (key == "source") {
        const auto s = lower(typed<std::string>(key, v));
        if (s == "dump" || s == "dump_file") ingest.source = SourceKind::kDumpFile;
        else if (s == "live" || s == "live_api") ingest.source = SourceKind::kLiveApi;
        else throw Error(ErrorCode::kInvalidConfig, "source must be 'dump' or 'live'");
    }
    else if (key == "page_size") ingest.page_size = typed<int>(key, v);
    else if (key == "dump_path") dump_path = typed<std::string>(key, v);
    else if (key == "api_base_url") api_base_url = typed<std::string>(key, v);
    else if (key == "alias_map") alias_map = typed<std::string>(key, v);
    else if (key == "threshold_mode") {
        const auto s = lower(typed<std::string>(key, v));
        if (s == "mean") threshold.mode = ThresholdMode::kMean;
        else if (s == "fixed") threshold.mode = ThresholdMode::kFixed;
        else throw Error(ErrorCode::kInvalidConfig, "threshold_mode must be 'mean' or 'fixed'");
    }
    else if (key == "threshold") {
        threshold.fixed_value = typed<std::int64_t>(key, v);
        threshold.mode = ThresholdMode::kFixed;
    }
    else if (key == "damping") rank.damping = typed<double>(key, v);
    else if (key == "tolerance") rank.tolerance = typed<double>(key, v);
    else if (key == "max_iterations") rank.max_iterations = typed<int>(key, v);
    else if (key == "budget_words") rank.budget_words = typed<int>(key, v);
    else if (key == "budget_sentences") rank.budget_sentences = typed<int>(key, v);
    else if (key == "endpoint_url") completion.endpoint_url = typed<std::string>(key, v);
    else if (key == "model_name") completion.model_name = typed<std::string>(key, v);
    else if (key == "max_output_tokens") completion.max_output_tokens = typed<int>(key, v);
    else if (key == "temperature") completion.temperature = typed<double>(key, v);
    else if (key == "completion_mode") {
        const auto s = lower(typed<std::string>(key, v));
        if (s == "live") completion.mode = CompletionMode::kLive;
        else if (s == "fixture") completion.mode = CompletionMode::kFixture;
        else throw Error(ErrorCode::kInvalidConfig, "completion_mode must be 'live' or 'fixture'");
    }
    else if (key == "fixture_path") completion.fixture_path = typed<std::string>(key, v);
    else if (key == "response_text_path") completion.response_text_path = typed<std::string>(key, v);
    else if (key == "prompt_char_cap") completion.prompt_char_cap = typed<std::size_t>(key, v);
    else if (key == "requests_per_minute") completion.requests_per_minute = typed<int>(key, v);
    else throw Error(ErrorCode::kInvalidConfig, "unknown config key '" + std::string(key) + "'");
}

void PipelineConfig::apply_object(const json& object) {
    if (!object.is_object()) throw Error(ErrorCode::kInvalidConfig, "config must be a JSON object");
    // "threshold_mode" last so an explicit mode wins over the implied one.
    for (const auto& [key, value] : object.items()) {
        if (key != "threshold_mode") apply(key, value);
    }
    if (object.contains("threshold_mode")) apply("threshold_mode", object["threshold_mode"]);
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
    PipelineConfig config;
    std::string text;
    try {
        text = io::read_file(path);
    } catch (const Error& e) {
        throw Error(ErrorCode::kInvalidConfig, "config file: " + std::string(e.what()));
    }
    try {
        config.apply_object(json::parse(text));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::kInvalidConfig, path.string() + ": " + e.what());
    }
    return config;
}

namespace {

std::string utc_now_iso() {
    const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
    const auto days = std::chrono::floor<std::chrono::days>(now);
    const std::chrono::year_month_day ymd(days);
    const std::chrono::hh_mm_ss hms(now - days);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                  static_cast<int>(hms.seconds().count()));
    return buf;
}

// Run timestamps live only in this side file so stage outputs stay byte-stable.
void write_meta(const PipelineConfig& config, std::string_view stage, json details) {
    details["stage"] = stage;
    details["finished_at"] = utc_now_iso();
    io::write_file_atomic(config.store_dir / (std::string(stage) + ".meta.json"), details.dump(2) + "\n");
}

std::string jsonl(const std::vector<json>& rows) {
    std::string out;
    for (const auto& r : rows) out += r.dump() + "\n";
    return out;
}

PostStore read_post_store(const std::filesystem::path& path) {
    PostStore store;
    io::for_each_line(path, [&](std::string_view line, std::size_t number) {
        if (line.empty()) return;
        try {
            const auto j = json::parse(line);
            const auto kind = j.at("kind").get<std::string>();
            if (kind == "question") store.questions.push_back(question_from_json(j));
            else if (kind == "answer") store.answers.push_back(answer_from_json(j));
            else throw json::other_error::create(501, "unknown kind " + kind, &j);
        } catch (const json::exception& e) {
            throw Error(ErrorCode::kIoError, path.string() + ":" + std::to_string(number) + ": " + e.what());
        }
    });
    return store;
}

}  // namespace

int cmd_ingest(const PipelineConfig& config, std::ostream& out) {
    config.ingest.validate();
    PostStore store;
    std::size_t skipped = 0;
    std::size_t filtered = 0;

    if (config.ingest.source == SourceKind::kDumpFile) {
        if (config.dump_path.empty()) throw Error(ErrorCode::kInvalidConfig, "dump_path is required for source=dump");
        try {
            auto result = read_dump(config.dump_path, config.ingest);
            store = std::move(result.posts);
            skipped = result.skipped_count;
            filtered = result.filtered_count;
        } catch (const Error& e) {
            // A dump without records is a valid, empty ingest.
            if (e.code() != ErrorCode::kEmptyDump) throw;
        }
    } else {
        auto ingest = config.ingest;
        if (const char* key = std::getenv("APISUM_SO_KEY"); key != nullptr && *key != '\0') ingest.api_key = key;
        auto transport = make_http_transport();
        StackExchangeClient client(*transport, ingest, config.api_base_url);
        client.fetch_questions([&](const Question& q) { store.questions.push_back(q); });
        std::vector<std::int64_t> ids;
        ids.reserve(store.questions.size());
        for (const auto& q : store.questions) ids.push_back(q.id);
        client.fetch_answers(ids, [&](const Answer& a) { store.answers.push_back(a); });
    }

    io::write_file_atomic(config.posts_path(), write_post_store(store));
    write_meta(config, "ingest",
               {{"questions", store.questions.size()}, {"answers", store.answers.size()},
                {"skipped", skipped}, {"filtered", filtered}});
    out << "questions: " << store.questions.size() << ", answers: " << store.answers.size()
        << ", skipped: " << skipped << "\n";
    return exit_code::kOk;
}

int cmd_extract(const PipelineConfig& config, std::ostream& out) {
    const auto store = read_post_store(config.posts_path());
    const auto aliases = config.alias_map.empty() ? AliasMap{} : load_alias_map(config.alias_map);
    const auto report = find_mentions(store.answers, aliases);

    std::vector<json> rows;
    rows.reserve(report.mentions.size());
    for (const auto& m : report.mentions) rows.push_back(to_json(m));
    io::write_file_atomic(config.mentions_path(), jsonl(rows));

    std::size_t rejected = 0;
    for (const auto& [reason, count] : report.rejections) rejected += count;
    const json rejection_report{{"spans_total", report.spans_total},
                                {"mentions", report.mentions.size()},
                                {"accepted_outside_sentences", report.accepted_outside_sentences},
                                {"rejected", rejected},
                                {"reasons", report.rejections}};
    io::write_file_atomic(config.rejections_path(), rejection_report.dump(2) + "\n");
    write_meta(config, "extract", {{"mentions", report.mentions.size()}});

    out << "spans: " << report.spans_total << ", mentions: " << report.mentions.size()
        << ", rejected: " << rejected << "\n";
    for (const auto& [reason, count] : report.rejections) out << "  " << reason << ": " << count << "\n";
    return exit_code::kOk;
}

int cmd_corpus(const PipelineConfig& config, std::ostream& out) {
    const auto store = read_post_store(config.posts_path());
    std::vector<ApiMention> mentions;
    io::for_each_line(config.mentions_path(), [&](std::string_view line, std::size_t number) {
        if (line.empty()) return;
        try {
            mentions.push_back(mention_from_json(json::parse(line)));
        } catch (const json::exception& e) {
            throw Error(ErrorCode::kIoError, config.mentions_path().string() + ":" + std::to_string(number) + ": " + e.what());
        }
    });

    const auto threshold = compute_score_threshold(store.answers, config.threshold);
    const auto corpora = build_corpora(store.answers, mentions, threshold);
    io::write_file_atomic(config.corpus_path(), write_corpus_store(corpora));
    write_meta(config, "corpus", {{"threshold", threshold}, {"corpora", corpora.size()}});

    out << "threshold: " << threshold << "\n";
    out << "corpora: " << corpora.size() << "\n";
    return exit_code::kOk;
}

int cmd_summarize(const PipelineConfig& config, const std::string& api_key, SummaryMethod method,
                  std::ostream& out, std::ostream& err) {
    const auto corpora = read_corpus_store(config.corpus_path());
    const auto it = corpora.find(api_key);
    if (it == corpora.end() || it->second.sentences.empty()) {
        err << "error: no corpus for API '" << api_key << "'\n";
        return exit_code::kUnknownApi;
    }

    Summary summary;
    if (method == SummaryMethod::kExtractive) {
        summary = summarize_extractive(it->second, config.rank);
    } else {
        auto completion = config.completion;
        if (const char* key = std::getenv("APISUM_LLM_KEY"); key != nullptr) completion.api_key = key;
        RateLimiter limiter(completion.requests_per_minute);
        CompletionDeps deps;
        deps.limiter = &limiter;
        summary = summarize_abstractive(it->second, completion, deps);
    }
    out << to_json(summary).dump() << "\n";
    return exit_code::kOk;
}

std::vector<StatsRow> corpus_stats(const CorpusMap& corpora, std::size_t top_n) {
    std::vector<StatsRow> rows;
    rows.reserve(corpora.size());
    for (const auto& [key, corpus] : corpora) {
        rows.push_back({key, corpus.mention_count, corpus.answer_ids.size(), corpus.sentences.size()});
    }
    std::sort(rows.begin(), rows.end(), [](const StatsRow& a, const StatsRow& b) {
        if (a.mention_count != b.mention_count) return a.mention_count > b.mention_count;
        return a.api_key < b.api_key;
    });
    if (rows.size() > top_n) rows.resize(top_n);
    return rows;
}

int cmd_stats(const PipelineConfig& config, std::size_t top_n, std::ostream& out) {
    const auto rows = corpus_stats(read_corpus_store(config.corpus_path()), top_n);
    out << "api_key\tmentions\tanswers\tsentences\n";
    for (const auto& r : rows) {
        out << r.api_key << '\t' << r.mention_count << '\t' << r.answer_count << '\t' << r.sentence_count << "\n";
    }
    return exit_code::kOk;
}

}  // namespace apisum
