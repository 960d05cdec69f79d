#include "apisum/summary.hpp"

namespace apisum {

std::string_view to_string(SummaryMethod method) {
    return method == SummaryMethod::kExtractive ? "EXTRACTIVE" : "ABSTRACTIVE";
}

nlohmann::json to_json(const Summary& summary) {
    nlohmann::json sentences = nlohmann::json::array();
    for (const auto& s : summary.sentences) {
        nlohmann::json entry{{"answer_id", s.answer_id}, {"index", s.index}};
        if (s.score) entry["score"] = *s.score;
        sentences.push_back(std::move(entry));
    }
    nlohmann::json j{{"api_key", summary.api_key},
                     {"method", to_string(summary.method)},
                     {"text", summary.text},
                     {"sentences", std::move(sentences)},
                     {"params", summary.params}};
    if (summary.converged) j["converged"] = *summary.converged;
    if (summary.iterations) j["iterations"] = *summary.iterations;
    return j;
}

}  // namespace apisum
