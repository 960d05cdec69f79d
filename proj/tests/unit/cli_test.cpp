#include <gtest/gtest.h>

#include <regex>

#include "apisum/corpus.hpp"
#include "pipeline_runner.hpp"

namespace apisum {
namespace {

using testing::run;

TEST(Cli, HelpAndUsageErrors) {
    EXPECT_EQ(run({"--help"}).code, 0);
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"summarize"}).code, 2);
    EXPECT_EQ(run({"summarize", "x", "--method", "poetry"}).code, 2);
}

TEST(Cli, InvalidConfigValuesExitTwo) {
    testing::TempDir dir;
    EXPECT_EQ(run({"corpus", "--store-dir", dir.path().string(), "--damping", "1.5"}).code, 2);
    EXPECT_EQ(run({"ingest", "--store-dir", dir.path().string(), "--page_size", "0"}).code, 2);
    EXPECT_EQ(run({"ingest", "--store-dir", dir.path().string(), "--source", "carrier-pigeon"}).code, 2);
    testing::spit(dir / "bad.json", R"({"no_such_key": 1})");
    EXPECT_EQ(run({"stats", "--config", (dir / "bad.json").string()}).code, 2);
    EXPECT_EQ(run({"stats", "--config", (dir / "absent.json").string()}).code, 2);
}

TEST(Cli, MissingInputsExitThree) {
    testing::TempDir dir;
    EXPECT_EQ(run({"ingest", "--store-dir", dir.path().string(), "--dump_path", (dir / "nope.jsonl").string()}).code,
              3);
    EXPECT_EQ(run({"extract", "--store-dir", dir.path().string()}).code, 3);
}

TEST(Cli, EmptyDumpIsEmptyIngest) {
    testing::TempDir dir;
    testing::spit(dir / "empty.jsonl", "");
    const auto r = run({"ingest", "--store-dir", (dir / "store").string(), "--dump_path", (dir / "empty.jsonl").string()});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "questions: 0, answers: 0, skipped: 0\n");
}

TEST(Cli, FixturePipelineMatchesGoldens) {
    testing::TempDir dir;
    const auto store = dir / "store";
    const auto results = testing::build_fixture_store(store);
    ASSERT_EQ(results.size(), 3u);
    for (const auto& r : results) ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(results[0].out, "questions: 12, answers: 50, skipped: 1\n");
    EXPECT_TRUE(results[1].out.starts_with("spans: 97, mentions: 88, rejected: 9\n"));
    EXPECT_EQ(results[2].out, "threshold: 2\ncorpora: 53\n");
    for (const std::string name : {"posts.jsonl", "mentions.jsonl", "rejections.json", "corpus.jsonl"}) {
        EXPECT_EQ(testing::slurp(store / name), testing::slurp(testing::golden_path(name))) << name;
    }
    const auto s = run({"summarize", "onCreate", "--store-dir", store.string()});
    ASSERT_EQ(s.code, 0) << s.err;
    EXPECT_EQ(s.out, testing::slurp(testing::golden_path("summary_onCreate_extractive.json")));
}

TEST(Cli, OnCreateCorpusFollowsContextRules) {
    testing::TempDir dir;
    const auto store = dir / "store";
    for (const auto& r : testing::build_fixture_store(store)) ASSERT_EQ(r.code, 0) << r.err;
    const auto corpora = read_corpus_store(store / "corpus.jsonl");
    const auto& c = corpora.at("onCreate");
    EXPECT_EQ(c.mention_count, 13u);
    EXPECT_EQ(c.answer_ids, (std::set<std::int64_t>{2001, 2002, 2004, 2006, 2007, 2010, 2021, 2022, 2023, 2025,
                                                    2026, 2042, 2043}));
    EXPECT_EQ(c.sentences.size(), 30u);

    // Every CONTAINING sentence shows the span text; every other role sits next to one or is first.
    for (const auto& s : c.sentences) {
        if (s.roles & kContaining) EXPECT_NE(s.text.find("onCreate"), std::string::npos) << s.text;
        if (s.roles & kFirst) EXPECT_EQ(s.index, 0u);
    }
    const std::regex forbidden("\x01|\x02");
    for (const auto& s : c.sentences) EXPECT_FALSE(std::regex_search(s.text, forbidden));
}

TEST(Cli, UnknownApiExitsFour) {
    testing::TempDir dir;
    const auto store = dir / "store";
    for (const auto& r : testing::build_fixture_store(store)) ASSERT_EQ(r.code, 0) << r.err;
    const auto r = run({"summarize", "definitelyNotAnApi", "--store-dir", store.string()});
    EXPECT_EQ(r.code, 4);
    EXPECT_TRUE(r.out.empty());
    EXPECT_NE(r.err.find("definitelyNotAnApi"), std::string::npos);
}

TEST(Cli, StatsRanking) {
    testing::TempDir dir;
    const auto store = dir / "store";
    for (const auto& r : testing::build_fixture_store(store)) ASSERT_EQ(r.code, 0) << r.err;
    const auto top = run({"stats", "--store-dir", store.string(), "--top", "3"});
    ASSERT_EQ(top.code, 0) << top.err;
    std::istringstream lines(top.out);
    std::string header, first;
    std::getline(lines, header);
    std::getline(lines, first);
    EXPECT_EQ(header, "api_key\tmentions\tanswers\tsentences");
    EXPECT_TRUE(first.starts_with("onCreate\t13\t13\t30")) << first;
    EXPECT_EQ(std::count(top.out.begin(), top.out.end(), '\n'), 4);

    const auto none = run({"stats", "--store-dir", store.string(), "--top", "0"});
    EXPECT_EQ(none.out, "api_key\tmentions\tanswers\tsentences\n");
}

TEST(Cli, FixedThresholdIsMonotone) {
    testing::TempDir a;
    testing::TempDir b;
    for (const auto& r : testing::build_fixture_store(a / "s", {"--threshold", "0"})) ASSERT_EQ(r.code, 0) << r.err;
    for (const auto& r : testing::build_fixture_store(b / "s", {"--threshold", "5"})) ASSERT_EQ(r.code, 0) << r.err;
    const auto low = read_corpus_store(a / "s" / "corpus.jsonl");
    const auto high = read_corpus_store(b / "s" / "corpus.jsonl");
    std::size_t low_total = 0;
    std::size_t high_total = 0;
    for (const auto& [k, c] : low) low_total += c.sentences.size();
    for (const auto& [k, c] : high) {
        high_total += c.sentences.size();
        ASSERT_TRUE(low.contains(k));
        EXPECT_GE(low.at(k).sentences.size(), c.sentences.size());
    }
    EXPECT_GT(low_total, high_total);
}

TEST(Cli, AliasMapRenamesKeys) {
    testing::TempDir dir;
    const auto store = dir / "store";
    for (const auto& r : testing::build_fixture_store(store, {"--alias_map", testing::fixture_path("aliases.json")}))
        ASSERT_EQ(r.code, 0) << r.err;
    const auto corpora = read_corpus_store(store / "corpus.jsonl");
    EXPECT_TRUE(corpora.contains("app.activity.onCreate"));
    EXPECT_FALSE(corpora.contains("onCreate"));
}

TEST(Cli, AbstractiveFixtureMode) {
    testing::TempDir dir;
    const auto store = dir / "store";
    for (const auto& r : testing::build_fixture_store(store)) ASSERT_EQ(r.code, 0) << r.err;
    const auto r = run({"summarize", "onCreate", "--method", "abstractive", "--store-dir", store.string(),
                        "--completion_mode", "fixture", "--fixture_path", testing::fixture_path("completions.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["method"], "ABSTRACTIVE");
    EXPECT_TRUE(j["text"].get<std::string>().starts_with("OnCreate is the first method in the Activity lifecycle"));

    const auto miss = run({"summarize", "Bundle", "--method", "abstractive", "--store-dir", store.string(),
                           "--completion_mode", "fixture", "--fixture_path", testing::fixture_path("completions.json")});
    EXPECT_EQ(miss.code, 3);
}

}  // namespace
}  // namespace apisum
