#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nblint {

enum class ErrorCode {
  kMalformedJson,
  kNotANotebook,
  kUnsupportedFormat,
  kIo,
  kCorruptArchive,
  kZipSlipRejected,
  kInvalidUrl,
  kNetwork,
  kRepositoryNotFound,
  kPluginLoad,
  kDuplicateRuleId,
  kUnknownRuleId,
  kConfigParse,
  kInvalidValue,
  kTargetNotFound,
};

std::string_view ToString(ErrorCode code);

// Every operational failure in the library is reported as an Error. The CLI
// maps all of them to exit status 2.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace nblint
