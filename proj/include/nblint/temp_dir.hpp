#pragma once

#include <filesystem>
#include <memory>
#include <string_view>

namespace nblint {

// A fresh directory under the system temp location, removed recursively on
// destruction.
class TempDir {
 public:
  static std::shared_ptr<TempDir> Create(std::string_view prefix = "nblint");

  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  explicit TempDir(std::filesystem::path path) : path_(std::move(path)) {}

  std::filesystem::path path_;
};

}  // namespace nblint
