#include "nblint/temp_dir.hpp"

#include <stdlib.h>

#include <cerrno>
#include <cstring>
#include <string>
#include <system_error>

#include "nblint/error.hpp"

namespace nblint {

std::shared_ptr<TempDir> TempDir::Create(std::string_view prefix) {
  std::error_code ec;
  const auto base = std::filesystem::temp_directory_path(ec);
  if (ec) throw Error(ErrorCode::kIo, "no temporary directory: " + ec.message());
  std::string pattern = (base / (std::string(prefix) + "-XXXXXX")).string();
  if (mkdtemp(pattern.data()) == nullptr) {
    throw Error(ErrorCode::kIo, "cannot create temporary directory: " + std::string(std::strerror(errno)));
  }
  return std::shared_ptr<TempDir>(new TempDir(pattern));
}

TempDir::~TempDir() {
  std::error_code ignored;
  std::filesystem::remove_all(path_, ignored);
}

}  // namespace nblint
