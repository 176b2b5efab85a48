#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace nblint {

struct CliEnvironment {
  std::filesystem::path working_dir;
  // Color is used only when this is true and --no-color is absent.
  bool stdout_is_terminal = false;
  // Supplies the timestamp for --timestamp.
  std::function<std::string()> clock;
};

// The whole program: configuration, loading, analysis, rendering. Returns the
// process exit status: 0 clean, 1 findings at or above the fail level, 2
// operational error.
int RunCli(const std::vector<std::string>& args, const CliEnvironment& env, std::ostream& out,
           std::ostream& err);

// Current UTC time as ISO 8601, to the second.
std::string UtcTimestamp();

}  // namespace nblint
