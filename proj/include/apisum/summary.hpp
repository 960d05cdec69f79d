#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace apisum {

enum class SummaryMethod { kExtractive, kAbstractive };

std::string_view to_string(SummaryMethod method);

struct SentenceProvenance {
    std::int64_t answer_id = 0;
    std::size_t index = 0;
    std::optional<double> score;  // extractive only
};

struct Summary {
    std::string api_key;
    SummaryMethod method = SummaryMethod::kExtractive;
    std::string text;
    std::vector<SentenceProvenance> sentences;
    nlohmann::json params = nlohmann::json::object();
    std::optional<bool> converged;  // extractive only
    std::optional<int> iterations;  // extractive only
};

nlohmann::json to_json(const Summary& summary);

}  // namespace apisum
