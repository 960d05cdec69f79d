#include "apisum/extract.hpp"

#include <gtest/gtest.h>

#include <random>

#include "apisum/error.hpp"
#include "apisum/html.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace apisum {
namespace {

std::vector<std::string> texts(const std::vector<CodeSpan>& spans) {
    std::vector<std::string> out;
    for (const auto& s : spans) out.push_back(s.raw_text);
    return out;
}

TEST(DecodeEntities, NamedAndNumeric) {
    EXPECT_EQ(html::decode_entities("a &lt;b&gt; &amp; &quot;c&quot; &apos;"), "a <b> & \"c\" '");
    EXPECT_EQ(html::decode_entities("&#65;&#x42;&#X63;"), "ABc");
    EXPECT_EQ(html::decode_entities("&#233;"), "\xC3\xA9");
    EXPECT_EQ(html::decode_entities("&bogus; &amp &#xZZ;"), "&bogus; &amp &#xZZ;");
}

TEST(ExtractCodeSpans, SingleInlineSpan) {
    const auto spans = extract_code_spans("<p>Use <code>setContentView()</code> here</p>", 7);
    ASSERT_EQ(spans.size(), 1u);
    EXPECT_EQ(spans[0].raw_text, "setContentView()");
    EXPECT_EQ(spans[0].answer_id, 7);
    EXPECT_EQ(spans[0].ordinal, 0u);
    EXPECT_FALSE(spans[0].in_block);
}

TEST(ExtractCodeSpans, PreBlockKeepsNewline) {
    const auto spans = extract_code_spans("<pre><code>int x = 5;\nfoo();</code></pre>");
    ASSERT_EQ(spans.size(), 1u);
    EXPECT_EQ(spans[0].raw_text, "int x = 5;\nfoo();");
    EXPECT_TRUE(spans[0].in_block);
}

TEST(ExtractCodeSpans, DocumentOrder) {
    const auto spans = extract_code_spans("<p><code>a.b()</code> then <code>if</code></p>");
    EXPECT_EQ(texts(spans), (std::vector<std::string>{"a.b()", "if"}));
    EXPECT_EQ(spans[1].ordinal, 1u);
}

TEST(ExtractCodeSpans, EntitiesDecodedAndAttributesAllowed) {
    const auto spans = extract_code_spans("<code class=\"lang-java\">List&lt;String&gt;</code><CODE>x</CODE >");
    EXPECT_EQ(texts(spans), (std::vector<std::string>{"List<String>", "x"}));
}

TEST(ExtractCodeSpans, UnterminatedRunsToEnd) {
    const auto spans = extract_code_spans("<p>see <code>foo() and more");
    ASSERT_EQ(spans.size(), 1u);
    EXPECT_EQ(spans[0].raw_text, "foo() and more");
    EXPECT_TRUE(spans[0].unterminated);
}

TEST(ExtractCodeSpans, NoSpans) {
    EXPECT_TRUE(extract_code_spans("").empty());
    EXPECT_TRUE(extract_code_spans("<p>a < b and c > d</p>").empty());
}

// Concatenating markup/text pieces and spans gives back the decoded body.
TEST(SplitBody, RoundTripOnRandomHtml) {
    std::mt19937 rng(1234);
    const std::vector<std::string> atoms = {"<p>", "</p>", "<code>", "</code>", "<pre>", "</pre>", "a", "b.c()",
                                            " ", "\n", "&lt;", "&amp;", "&#65;", "<", ">", "&", "<br/>",
                                            "<code class='x'>", "</CODE>", "<!-- c -->", "x y"};
    for (int trial = 0; trial < 2000; ++trial) {
        std::string body;
        const int n = static_cast<int>(rng() % 20);
        for (int i = 0; i < n; ++i) body += atoms[rng() % atoms.size()];
        std::string rebuilt;
        std::size_t span_pieces = 0;
        for (const auto& piece : split_body(body)) {
            rebuilt += piece.text;
            span_pieces += piece.is_span ? 1 : 0;
        }
        ASSERT_EQ(rebuilt, html::decode_entities(body)) << body;
        ASSERT_EQ(span_pieces, extract_code_spans(body).size()) << body;
    }
}

TEST(Filter, AcceptsMethodCall) {
    EXPECT_TRUE(filter_api_candidate("setContentView()").accepted());
}

TEST(Filter, RejectionReasonsInRuleOrder) {
    EXPECT_EQ(filter_api_candidate("int x = 5;\nfoo();").rejection, RejectReason::kMultiline);
    EXPECT_EQ(filter_api_candidate("new Intent(this)").rejection, RejectReason::kWhitespace);
    EXPECT_EQ(filter_api_candidate(std::string(61, 'a')).rejection, RejectReason::kTooLong);
    EXPECT_EQ(filter_api_candidate("foo(bar)").rejection, RejectReason::kPattern);
    EXPECT_EQ(filter_api_candidate("a.b().c()").rejection, RejectReason::kPattern);
    EXPECT_EQ(filter_api_candidate("").rejection, RejectReason::kPattern);
    EXPECT_EQ(filter_api_candidate("if").rejection, RejectReason::kStoplist);
    EXPECT_EQ(filter_api_candidate("foo.null").rejection, RejectReason::kStoplist);
}

TEST(Filter, ClassNamesAndDottedChainsAccepted) {
    EXPECT_TRUE(filter_api_candidate("Bundle").accepted());
    EXPECT_TRUE(filter_api_candidate("app.activity.onCreate").accepted());
    EXPECT_TRUE(filter_api_candidate("_private1").accepted());
    EXPECT_TRUE(filter_api_candidate(std::string(60, 'a')).accepted());
    EXPECT_TRUE(filter_api_candidate("this.finish()").accepted());
}

TEST(Filter, RandomizedAgreesWithRegexOracle) {
    std::mt19937 rng(99);
    const std::string alphabet = "abAZ_09.() \n\tif";
    const std::vector<std::string> seeds = {"if", "null", "onCreate", "true", "a.b", "()", "x.if()"};
    for (int trial = 0; trial < 5000; ++trial) {
        std::string s;
        if (rng() % 4 == 0) s = seeds[rng() % seeds.size()];
        const int n = static_cast<int>(rng() % 12);
        for (int i = 0; i < n; ++i) s += alphabet[rng() % alphabet.size()];
        const auto verdict = filter_api_candidate(s);
        const auto check = testing::recheck_api_rules(s);
        ASSERT_EQ(verdict.accepted(), check.all()) << '"' << s << '"';
        if (verdict.accepted()) {
            ASSERT_TRUE(testing::recheck_api_rules(s).pattern);
            const auto key = normalize_api_name(s);
            ASSERT_FALSE(key.empty());
            ASSERT_NE(key.back(), '(');
            ASSERT_NE(key.back(), ')');
        }
    }
}

TEST(Normalize, StripsCallSuffix) {
    EXPECT_EQ(normalize_api_name("onCreate()"), "onCreate");
    EXPECT_EQ(normalize_api_name("app.activity.onCreate"), "app.activity.onCreate");
}

TEST(Normalize, AppliesAliasByExactMatch) {
    const AliasMap aliases{{"onCreate", "app.activity.onCreate"}};
    EXPECT_EQ(normalize_api_name("onCreate", aliases), "app.activity.onCreate");
    EXPECT_EQ(normalize_api_name("onCreate()", aliases), "app.activity.onCreate");
    EXPECT_EQ(normalize_api_name("oncreate", aliases), "oncreate");
}

TEST(Normalize, CaseSensitiveKeys) {
    EXPECT_NE(normalize_api_name("Bundle"), normalize_api_name("bundle"));
}

TEST(AliasMap, LoadsJsonObject) {
    const auto aliases = load_alias_map(testing::data_dir() / "fixture" / "aliases.json");
    EXPECT_EQ(aliases.at("onCreate"), "app.activity.onCreate");
}

TEST(AliasMap, RejectsNonObject) {
    testing::TempDir dir;
    testing::spit(dir / "bad.json", "[1,2]");
    EXPECT_THROW(load_alias_map(dir / "bad.json"), Error);
}

TEST(FindMentions, SentenceIndexAndHistogram) {
    Answer a;
    a.id = 5;
    a.body_html = "<p>First sentence here. Then call <code>onCreate()</code> now.</p>"
                  "<p>Avoid <code>if</code> and <code>new Foo()</code>.</p>"
                  "<pre><code>setContentView()</code></pre>";
    const auto report = find_mentions(a);
    ASSERT_EQ(report.mentions.size(), 1u);
    EXPECT_EQ(report.mentions[0].api_key, "onCreate");
    EXPECT_EQ(report.mentions[0].raw_token, "onCreate()");
    EXPECT_EQ(report.mentions[0].sentence_index, 1u);
    EXPECT_EQ(report.spans_total, 4u);
    EXPECT_EQ(report.rejections.at("stoplist"), 1u);
    EXPECT_EQ(report.rejections.at("whitespace"), 1u);
    EXPECT_EQ(report.accepted_outside_sentences, 1u);
}

TEST(FindMentions, NoCodeTagsNoMentions) {
    Answer a;
    a.id = 1;
    a.body_html = "<p>Nothing to see here.</p>";
    const auto report = find_mentions(a);
    EXPECT_TRUE(report.mentions.empty());
    EXPECT_EQ(report.spans_total, 0u);
}

TEST(FindMentions, AtMostOneMentionPerSpan) {
    std::mt19937 rng(8);
    const std::vector<std::string> atoms = {"<p>", "</p>", "<code>x.y()</code>", "<code>if</code>", "Word. ",
                                            "Next ", "<pre><code>a()</code></pre>", "<li>", "<code>Bundle</code>"};
    for (int trial = 0; trial < 300; ++trial) {
        Answer a;
        a.id = trial + 1;
        for (int i = static_cast<int>(rng() % 15); i > 0; --i) a.body_html += atoms[rng() % atoms.size()];
        const auto report = find_mentions(a);
        ASSERT_LE(report.mentions.size(), report.spans_total);
    }
}

TEST(MentionJson, RoundTrip) {
    const ApiMention m{"onCreate", "onCreate()", 12, 3};
    EXPECT_EQ(mention_from_json(to_json(m)), m);
}

}  // namespace
}  // namespace apisum
