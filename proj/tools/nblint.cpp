#include <unistd.h>

#include <filesystem>
#include <iostream>

#include "nblint/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  nblint::CliEnvironment env;
  std::error_code ec;
  env.working_dir = std::filesystem::current_path(ec);
  env.stdout_is_terminal = isatty(STDOUT_FILENO) != 0;
  env.clock = nblint::UtcTimestamp;
  return nblint::RunCli(args, env, std::cout, std::cerr);
}
