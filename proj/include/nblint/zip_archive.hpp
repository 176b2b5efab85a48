#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nblint::zip {

struct Entry {
  std::string name;
  bool is_directory = false;
  bool is_symlink = false;
  bool encrypted = false;
  uint16_t method = 0;
  uint32_t crc32 = 0;
  uint64_t compressed_size = 0;
  uint64_t uncompressed_size = 0;
  uint64_t local_header_offset = 0;
};

// Reads a PKZIP archive held in memory. Stored and deflated entries are
// supported, including zip64 size and offset records. Malformed input throws
// Error(kCorruptArchive).
class Archive {
 public:
  explicit Archive(std::string bytes);

  static Archive Open(const std::filesystem::path& path);

  const std::vector<Entry>& entries() const { return entries_; }

  // Decompressed contents, verified against the stored CRC-32.
  std::string Read(const Entry& entry) const;

 private:
  void ParseCentralDirectory();

  std::string bytes_;
  std::vector<Entry> entries_;
};

// Maps an entry name onto a relative path inside the extraction root. `.`
// segments are dropped and `..` segments resolved; returns nullopt when the
// result would leave the root (leading `..`, absolute paths, drive letters).
// An empty path means the entry names the root itself.
std::optional<std::filesystem::path> ResolveEntryPath(std::string_view name);

struct ExtractOptions {
  uint64_t max_total_bytes = uint64_t{4} << 30;
};

// Extracts every regular file and directory of the archive under
// `destination`. All entry names are checked before anything is written; an
// escaping entry throws Error(kZipSlipRejected). Symbolic-link entries are
// skipped.
void ExtractAll(const std::filesystem::path& archive, const std::filesystem::path& destination,
                const ExtractOptions& options = {});

}  // namespace nblint::zip
