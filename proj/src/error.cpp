#include "apisum/error.hpp"

namespace apisum {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::kNetworkError: return "NETWORK_ERROR";
        case ErrorCode::kQuotaExceeded: return "QUOTA_EXCEEDED";
        case ErrorCode::kMalformedResponse: return "MALFORMED_RESPONSE";
        case ErrorCode::kFileNotFound: return "FILE_NOT_FOUND";
        case ErrorCode::kEmptyDump: return "EMPTY_DUMP";
        case ErrorCode::kEmptyCollection: return "EMPTY_COLLECTION";
        case ErrorCode::kIndexOutOfRange: return "INDEX_OUT_OF_RANGE";
        case ErrorCode::kEmptyAfterCleaning: return "EMPTY_AFTER_CLEANING";
        case ErrorCode::kEmptyCorpus: return "EMPTY_CORPUS";
        case ErrorCode::kAuthError: return "AUTH_ERROR";
        case ErrorCode::kFixtureMiss: return "FIXTURE_MISS";
        case ErrorCode::kEmptyCompletion: return "EMPTY_COMPLETION";
        case ErrorCode::kInvalidConfig: return "INVALID_CONFIG";
        case ErrorCode::kIoError: return "IO_ERROR";
    }
    return "UNKNOWN";
}

}  // namespace apisum
