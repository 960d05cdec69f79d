#include <cctype>
#include <map>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "apisum/error.hpp"
#include "apisum/pipeline.hpp"

namespace apisum {

namespace {

int exit_for(ErrorCode code) {
    return code == ErrorCode::kInvalidConfig ? exit_code::kConfig : exit_code::kIo;
}

// Flag text to JSON: numbers stay numbers, anything else is a string.
nlohmann::json flag_value(const std::string& text) {
    try {
        auto j = nlohmann::json::parse(text);
        if (j.is_number() || j.is_boolean()) return j;
    } catch (const nlohmann::json::exception&) {
    }
    return text;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Mine Q&A posts for API mentions and summarize each API"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "JSON config file with flat keys");

    std::map<std::string, std::optional<std::string>> overrides;
    for (const auto& key : PipelineConfig::keys()) {
        auto& slot = overrides[key];
        std::string names = "--" + key;
        if (key == "store_dir") names += ",--store-dir";
        app.add_option_function<std::string>(names, [&slot](const std::string& v) { slot = v; },
                                             "overrides config key '" + key + "'");
    }

    auto* ingest = app.add_subcommand("ingest", "Read posts from a dump or the live API into the post store");
    auto* extract = app.add_subcommand("extract", "Find API mentions in stored answers");
    auto* corpus = app.add_subcommand("corpus", "Apply the score threshold and build per-API corpora");

    auto* summarize = app.add_subcommand("summarize", "Summarize one API from its corpus");
    std::string api_key;
    std::string method = "extractive";
    summarize->add_option("api_key", api_key, "API key as stored in the corpus")->required();
    summarize->add_option("--method", method, "extractive | abstractive")
        ->check(CLI::IsMember({"extractive", "abstractive"}, CLI::ignore_case));

    auto* stats = app.add_subcommand("stats", "Most-mentioned APIs");
    std::size_t top_n = 10;
    stats->add_option("--top,top_n", top_n, "rows to print");

    for (auto* sub : {ingest, extract, corpus, summarize, stats}) sub->fallthrough();

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_code::kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_code::kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::kConfig;
    }

    try {
        PipelineConfig config = config_path.empty() ? PipelineConfig{} : load_pipeline_config(config_path);
        for (const auto& [key, value] : overrides) {
            if (!value) continue;
            const bool keep_string = key == "store_dir" || key == "dump_path" || key == "tag" ||
                                     key == "model_name" || key == "fixture_path" || key == "alias_map";
            config.apply(key, keep_string ? nlohmann::json(*value) : flag_value(*value));
        }
        if (overrides["threshold_mode"]) config.apply("threshold_mode", *overrides["threshold_mode"]);
        config.rank.validate();

        if (ingest->parsed()) return cmd_ingest(config, out);
        if (extract->parsed()) return cmd_extract(config, out);
        if (corpus->parsed()) return cmd_corpus(config, out);
        if (summarize->parsed()) {
            std::string lowered = method;
            for (auto& c : lowered) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            const bool abstractive = lowered == "abstractive";
            return cmd_summarize(config, api_key, abstractive ? SummaryMethod::kAbstractive : SummaryMethod::kExtractive,
                                 out, err);
        }
        if (stats->parsed()) return cmd_stats(config, top_n, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_for(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::kIo;
    }
    return exit_code::kConfig;
}

}  // namespace apisum
