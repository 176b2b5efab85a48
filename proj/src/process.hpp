#pragma once

#include <string>
#include <vector>

namespace nblint::detail {

struct ProcessResult {
  // -1 when the program could not be started.
  int exit_code = -1;
  std::string error_output;
};

// Runs `argv` (looked up on PATH) without a shell. stdout is discarded and
// stderr captured. `extra_env` entries have the form NAME=VALUE.
ProcessResult RunProcess(const std::vector<std::string>& argv,
                         const std::vector<std::string>& extra_env = {});

bool ExecutableOnPath(const std::string& name);

}  // namespace nblint::detail
