#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace apisum {

enum class ErrorCode {
    kNetworkError,
    kQuotaExceeded,
    kMalformedResponse,
    kFileNotFound,
    kEmptyDump,
    kEmptyCollection,
    kIndexOutOfRange,
    kEmptyAfterCleaning,
    kEmptyCorpus,
    kAuthError,
    kFixtureMiss,
    kEmptyCompletion,
    kInvalidConfig,
    kIoError,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying one of the pipeline's error codes.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace apisum
