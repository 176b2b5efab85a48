#include "nblint/error.hpp"

namespace nblint {

std::string_view ToString(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedJson:
      return "malformed-json";
    case ErrorCode::kNotANotebook:
      return "not-a-notebook";
    case ErrorCode::kUnsupportedFormat:
      return "unsupported-format";
    case ErrorCode::kIo:
      return "io-error";
    case ErrorCode::kCorruptArchive:
      return "corrupt-archive";
    case ErrorCode::kZipSlipRejected:
      return "zip-slip-rejected";
    case ErrorCode::kInvalidUrl:
      return "invalid-url";
    case ErrorCode::kNetwork:
      return "network-error";
    case ErrorCode::kRepositoryNotFound:
      return "repository-not-found";
    case ErrorCode::kPluginLoad:
      return "plugin-load-error";
    case ErrorCode::kDuplicateRuleId:
      return "duplicate-rule-id";
    case ErrorCode::kUnknownRuleId:
      return "unknown-rule-id";
    case ErrorCode::kConfigParse:
      return "config-parse-error";
    case ErrorCode::kInvalidValue:
      return "invalid-value";
    case ErrorCode::kTargetNotFound:
      return "target-not-found";
  }
  return "unknown";
}

}  // namespace nblint
