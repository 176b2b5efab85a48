#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nblint/engine.hpp"
#include "nblint/remote.hpp"

namespace nblint {

inline constexpr std::string_view kDotenvFileName = ".pynblint";

enum class OutputFormat { kTerminal, kMarkdown, kJson };

// `.md` or `.json`, case-insensitive. Throws kInvalidValue otherwise.
OutputFormat FormatForPath(const std::filesystem::path& path);

struct Config {
  std::string target;
  std::optional<std::filesystem::path> output;
  std::optional<std::vector<std::string>> include;
  std::vector<std::string> exclude;
  FailLevel fail_level = FailLevel::kWarning;
  Thresholds thresholds;
  std::vector<std::string> plugins;
  std::vector<std::string> exclude_dirs = DiscoveryOptions{}.excluded_dirs;
  RemoteStrategy remote_strategy = RemoteStrategy::kAuto;
  std::string remote_fixture;  // for RemoteStrategy::kLocalFixture
  bool quiet = false;
  bool no_color = false;
  bool timestamp = false;

  OutputFormat output_format() const {
    return output ? FormatForPath(*output) : OutputFormat::kTerminal;
  }
  RuleSelection selection() const { return {include, exclude, fail_level}; }
};

// Raw KEY=VALUE pairs with upper-cased keys. `#` starts a comment line or,
// after whitespace, a trailing comment on an unquoted value. Values may be
// wrapped in single or double quotes. A leading `export ` is ignored.
// Throws kConfigParse with the line number for a malformed line.
std::map<std::string, std::string> ParseDotenv(std::string_view text);

// Thrown for --help and --version, and for command-line usage errors.
class UsageExit : public std::runtime_error {
 public:
  UsageExit(int status, const std::string& text) : std::runtime_error(text), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

// Merges built-in defaults, `<working_dir>/.pynblint` and the command line
// (without the program name). Each key is taken wholesale from the
// highest-precedence source that sets it: flag, then dotenv, then default.
// Relative output and plugin paths resolve against working_dir.
//
// Throws kConfigParse, kInvalidValue or UsageExit.
Config LoadConfig(const std::vector<std::string>& args, const std::filesystem::path& working_dir);

enum class InputKind { kRemote, kZip, kDirectory, kStandalone };

// Throws kInvalidUrl for URLs that are not public GitHub repositories and
// kTargetNotFound for paths that do not exist.
InputKind Dispatch(std::string_view target, const std::filesystem::path& working_dir);

}  // namespace nblint
