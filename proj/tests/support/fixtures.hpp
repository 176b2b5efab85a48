#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nblint::testing {

namespace fs = std::filesystem;

struct CellSpec {
  std::string kind = "code";  // "code", "markdown" or "raw"
  std::string source;
  std::optional<int> execution_count;
};

inline CellSpec Md(std::string source) { return {"markdown", std::move(source), std::nullopt}; }
inline CellSpec Code(std::string source, std::optional<int> count = std::nullopt) {
  return {"code", std::move(source), count};
}

// nbformat 4.5 JSON. Sources are written as line arrays, the way Jupyter
// saves them.
std::string NotebookJson(const std::vector<CellSpec>& cells, const std::string& language = "python");

void WriteFile(const fs::path& path, const std::string& content);
std::string ReadFile(const fs::path& path);

// Creates each (relative path, content) file, and the directories for paths
// ending in `/`.
void MakeTree(const fs::path& root, const std::vector<std::pair<std::string, std::string>>& files);

// A small in-memory zip writer used to build archives the loader must read
// or refuse.
class ZipWriter {
 public:
  void AddFile(const std::string& name, const std::string& data, bool deflate = true);
  void AddDirectory(const std::string& name);
  void AddSymlink(const std::string& name, const std::string& target);
  std::string Finish() const;

 private:
  struct Item {
    std::string name;
    std::string stored;
    uint16_t method;
    uint32_t crc;
    uint32_t size;
    uint32_t external_attributes;
    uint16_t version_made_by;
  };
  std::vector<Item> items_;
};

// Zips every file and directory under `dir`, entry names prefixed with
// `prefix` (for example "repo-main/").
void ZipDirectory(const fs::path& dir, const fs::path& zip_path, const std::string& prefix = "");

// Path of a built test artifact (plugins, the CLI) from the build tree.
fs::path BuildArtifact(const std::string& name);

}  // namespace nblint::testing
