#include "apisum/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <numeric>
#include <unordered_set>

#include "apisum/error.hpp"
#include "apisum/io.hpp"

namespace apisum {

using nlohmann::json;

void IngestConfig::validate() const {
    if (date_from >= date_to) {
        throw Error(ErrorCode::kInvalidConfig, "date_from must precede date_to");
    }
    if (page_size < 1 || page_size > 100) {
        throw Error(ErrorCode::kInvalidConfig, "page_size must be in [1,100]");
    }
    if (tag.empty()) throw Error(ErrorCode::kInvalidConfig, "tag must not be empty");
}

namespace {

bool parse_int(std::string_view text, std::int64_t& out) {
    if (text.empty()) return false;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc() && ptr == end;
}

std::int64_t field_int(std::string_view text, std::size_t pos, std::size_t len) {
    std::int64_t v = 0;
    if (pos + len > text.size() || !parse_int(text.substr(pos, len), v)) {
        throw Error(ErrorCode::kInvalidConfig, "bad timestamp: " + std::string(text));
    }
    return v;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

}  // namespace

Timestamp parse_timestamp(std::string_view text) {
    std::int64_t epoch = 0;
    if (parse_int(text, epoch)) return epoch;

    // YYYY-MM-DD[THH:MM:SS[Z]]
    if (text.size() < 10 || text[4] != '-' || text[7] != '-') {
        throw Error(ErrorCode::kInvalidConfig, "bad timestamp: " + std::string(text));
    }
    using namespace std::chrono;
    const year_month_day ymd{year(static_cast<int>(field_int(text, 0, 4))),
                             month(static_cast<unsigned>(field_int(text, 5, 2))),
                             day(static_cast<unsigned>(field_int(text, 8, 2)))};
    if (!ymd.ok()) throw Error(ErrorCode::kInvalidConfig, "bad date: " + std::string(text));
    std::int64_t seconds = sys_days(ymd).time_since_epoch() / std::chrono::seconds(1);
    if (text.size() == 10) return seconds;

    if (text.size() < 19 || (text[10] != 'T' && text[10] != ' ') || text[13] != ':' || text[16] != ':') {
        throw Error(ErrorCode::kInvalidConfig, "bad timestamp: " + std::string(text));
    }
    const auto hh = field_int(text, 11, 2);
    const auto mm = field_int(text, 14, 2);
    const auto ss = field_int(text, 17, 2);
    if (hh > 23 || mm > 59 || ss > 60) throw Error(ErrorCode::kInvalidConfig, "bad time: " + std::string(text));
    if (text.size() > 19 && text.substr(19) != "Z") {
        throw Error(ErrorCode::kInvalidConfig, "only UTC ('Z') timestamps are accepted: " + std::string(text));
    }
    return seconds + hh * 3600 + mm * 60 + ss;
}

json to_json(const Question& q) {
    return json{{"kind", "question"},     {"id", q.id},       {"title", q.title},
                {"body_html", q.body_html}, {"tags", q.tags},   {"creation_date", q.creation_date},
                {"score", q.score}};
}

json to_json(const Answer& a) {
    return json{{"kind", "answer"},       {"id", a.id},
                {"question_id", a.question_id}, {"body_html", a.body_html},
                {"score", a.score},       {"creation_date", a.creation_date},
                {"is_accepted", a.is_accepted}};
}

namespace {

std::int64_t positive_id(const json& j, const char* key) {
    if (!j.at(key).is_number_integer() || j.at(key).get<std::int64_t>() <= 0) {
        throw json::other_error::create(501, std::string(key) + " must be a positive integer", &j);
    }
    return j.at(key).get<std::int64_t>();
}

std::int64_t integer(const json& j, const char* key) {
    if (!j.at(key).is_number_integer()) {
        throw json::other_error::create(501, std::string(key) + " must be an integer", &j);
    }
    return j.at(key).get<std::int64_t>();
}

}  // namespace

Question question_from_json(const json& j) {
    Question q;
    q.id = positive_id(j, "id");
    q.title = j.at("title").get<std::string>();
    q.body_html = j.at("body_html").get<std::string>();
    q.tags = j.at("tags").get<std::vector<std::string>>();
    q.creation_date = integer(j, "creation_date");
    q.score = integer(j, "score");
    return q;
}

Answer answer_from_json(const json& j) {
    Answer a;
    a.id = positive_id(j, "id");
    a.question_id = positive_id(j, "question_id");
    a.body_html = j.at("body_html").get<std::string>();
    a.score = integer(j, "score");
    a.creation_date = integer(j, "creation_date");
    a.is_accepted = j.value("is_accepted", false);
    return a;
}

DumpReadResult read_dump(const std::filesystem::path& path, const IngestConfig& config) {
    DumpReadResult result;
    std::vector<Question> questions;
    std::vector<Answer> answers;
    std::unordered_set<std::int64_t> question_ids;
    std::unordered_set<std::int64_t> answer_ids;

    io::for_each_line(path, [&](std::string_view line, std::size_t) {
        if (line.find_first_not_of(" \t") == std::string_view::npos) return;
        try {
            const auto j = json::parse(line);
            const auto kind = j.at("kind").get<std::string>();
            if (kind == "question") {
                auto q = question_from_json(j);
                if (!question_ids.insert(q.id).second) {
                    ++result.skipped_count;
                    return;
                }
                questions.push_back(std::move(q));
            } else if (kind == "answer") {
                auto a = answer_from_json(j);
                if (!answer_ids.insert(a.id).second) {
                    ++result.skipped_count;
                    return;
                }
                answers.push_back(std::move(a));
            } else {
                ++result.skipped_count;
            }
        } catch (const json::exception&) {
            ++result.skipped_count;
        }
    });

    if (questions.empty() && answers.empty()) {
        throw Error(ErrorCode::kEmptyDump, path.string() + " has no valid records");
    }

    const auto wanted_tag = lower(config.tag);
    std::unordered_set<std::int64_t> kept_questions;
    for (auto& q : questions) {
        const bool tagged = std::any_of(q.tags.begin(), q.tags.end(),
                                        [&](const std::string& t) { return lower(t) == wanted_tag; });
        if (tagged && config.in_window(q.creation_date)) {
            kept_questions.insert(q.id);
            result.posts.questions.push_back(std::move(q));
        } else {
            ++result.filtered_count;
        }
    }
    for (auto& a : answers) {
        if (kept_questions.contains(a.question_id) && config.in_window(a.creation_date)) {
            result.posts.answers.push_back(std::move(a));
        } else {
            ++result.filtered_count;
        }
    }
    return result;
}

std::string write_post_store(const PostStore& store) {
    std::string out;
    for (const auto& q : store.questions) out += to_json(q).dump() + "\n";
    for (const auto& a : store.answers) out += to_json(a).dump() + "\n";
    return out;
}

std::int64_t compute_score_threshold(std::span<const Answer> answers, const ThresholdSpec& spec) {
    if (spec.mode == ThresholdMode::kFixed) return spec.fixed_value;
    if (answers.empty()) {
        throw Error(ErrorCode::kEmptyCollection, "mean score threshold over zero answers");
    }
    const std::int64_t sum = std::accumulate(answers.begin(), answers.end(), std::int64_t{0},
                                             [](std::int64_t acc, const Answer& a) { return acc + a.score; });
    const auto n = static_cast<std::int64_t>(answers.size());
    // floor division; C++ truncates toward zero
    std::int64_t q = sum / n;
    if (sum % n != 0 && sum < 0) --q;
    return q;
}

}  // namespace apisum
