#include "nblint/zip_archive.hpp"

#include <zlib.h>

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

#include "nblint/error.hpp"

namespace nblint::zip {
namespace {

constexpr uint32_t kLocalHeaderSignature = 0x04034b50;
constexpr uint32_t kCentralHeaderSignature = 0x02014b50;
constexpr uint32_t kEndOfCentralDirSignature = 0x06054b50;
constexpr uint32_t kZip64EndSignature = 0x06064b50;
constexpr uint32_t kZip64LocatorSignature = 0x07064b50;
constexpr uint16_t kZip64ExtraId = 0x0001;
constexpr size_t kEndRecordSize = 22;
constexpr size_t kCentralHeaderSize = 46;
constexpr size_t kLocalHeaderSize = 30;

[[noreturn]] void Corrupt(const std::string& what) {
  throw Error(ErrorCode::kCorruptArchive, "corrupt zip archive: " + what);
}

// Bounds-checked little-endian reader over the archive bytes.
class Cursor {
 public:
  Cursor(std::string_view data, uint64_t offset) : data_(data), pos_(offset) {
    if (offset > data.size()) Corrupt("offset out of range");
  }

  uint16_t U16() { return static_cast<uint16_t>(Take(2)); }
  uint32_t U32() { return static_cast<uint32_t>(Take(4)); }
  uint64_t U64() { return Take(8); }

  std::string_view Bytes(uint64_t count) {
    if (count > data_.size() - pos_) Corrupt("truncated record");
    const std::string_view out = data_.substr(pos_, count);
    pos_ += count;
    return out;
  }

  void Skip(uint64_t count) { Bytes(count); }
  uint64_t position() const { return pos_; }

 private:
  uint64_t Take(int width) {
    if (static_cast<uint64_t>(width) > data_.size() - pos_) Corrupt("truncated record");
    uint64_t value = 0;
    for (int i = 0; i < width; ++i) {
      value |= static_cast<uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
    }
    pos_ += width;
    return value;
  }

  std::string_view data_;
  uint64_t pos_;
};

std::string Inflate(std::string_view compressed, uint64_t expected_size) {
  if (expected_size > std::numeric_limits<size_t>::max() / 2) Corrupt("entry too large");
  std::string out(expected_size, '\0');
  z_stream stream{};
  if (inflateInit2(&stream, -MAX_WBITS) != Z_OK) Corrupt("cannot initialize inflater");
  stream.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(compressed.data()));
  stream.avail_in = static_cast<uInt>(compressed.size());
  stream.next_out = reinterpret_cast<Bytef*>(out.data());
  stream.avail_out = static_cast<uInt>(out.size());
  int status = inflate(&stream, Z_FINISH);
  // A zero-length output buffer reports Z_BUF_ERROR for an empty stream.
  const bool done = status == Z_STREAM_END || (expected_size == 0 && status == Z_BUF_ERROR);
  const uLong produced = stream.total_out;
  inflateEnd(&stream);
  if (!done || produced != expected_size) Corrupt("deflate stream does not match declared size");
  return out;
}

}  // namespace

Archive::Archive(std::string bytes) : bytes_(std::move(bytes)) { ParseCentralDirectory(); }

Archive Archive::Open(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, path.string() + ": cannot open archive");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return Archive(buffer.str());
}

void Archive::ParseCentralDirectory() {
  const std::string_view data = bytes_;
  if (data.size() < kEndRecordSize) Corrupt("too small to be a zip archive");

  // The end record sits at the tail, followed by a comment of up to 64 KiB.
  const size_t lowest = data.size() > kEndRecordSize + 0xFFFF ? data.size() - kEndRecordSize - 0xFFFF : 0;
  std::optional<size_t> end_offset;
  for (size_t at = data.size() - kEndRecordSize + 1; at-- > lowest;) {
    if (Cursor(data, at).U32() == kEndOfCentralDirSignature) {
      end_offset = at;
      break;
    }
  }
  if (!end_offset) Corrupt("end of central directory not found");

  Cursor end(data, *end_offset + 4);
  const uint16_t disk = end.U16();
  const uint16_t directory_disk = end.U16();
  end.U16();
  uint64_t total_entries = end.U16();
  uint64_t directory_size = end.U32();
  uint64_t directory_offset = end.U32();
  if (disk != 0 || directory_disk != 0) Corrupt("multi-volume archives are not supported");

  if (total_entries == 0xFFFF || directory_size == 0xFFFFFFFF || directory_offset == 0xFFFFFFFF) {
    if (*end_offset < 20) Corrupt("zip64 locator missing");
    Cursor locator(data, *end_offset - 20);
    if (locator.U32() != kZip64LocatorSignature) Corrupt("zip64 locator missing");
    locator.U32();
    Cursor end64(data, locator.U64());
    if (end64.U32() != kZip64EndSignature) Corrupt("zip64 end record missing");
    end64.Skip(8 + 2 + 2 + 4 + 4 + 8);
    total_entries = end64.U64();
    directory_size = end64.U64();
    directory_offset = end64.U64();
  }
  if (directory_offset > data.size() || directory_size > data.size() - directory_offset) {
    Corrupt("central directory out of range");
  }

  Cursor cursor(data, directory_offset);
  entries_.reserve(std::min<uint64_t>(total_entries, data.size() / kCentralHeaderSize));
  for (uint64_t i = 0; i < total_entries; ++i) {
    if (cursor.U32() != kCentralHeaderSignature) Corrupt("bad central directory header");
    Entry entry;
    const uint16_t made_by = cursor.U16();
    cursor.U16();
    const uint16_t flags = cursor.U16();
    entry.method = cursor.U16();
    cursor.U32();
    entry.crc32 = cursor.U32();
    entry.compressed_size = cursor.U32();
    entry.uncompressed_size = cursor.U32();
    const uint16_t name_length = cursor.U16();
    const uint16_t extra_length = cursor.U16();
    const uint16_t comment_length = cursor.U16();
    cursor.U16();
    cursor.U16();
    const uint32_t external_attributes = cursor.U32();
    entry.local_header_offset = cursor.U32();
    entry.name = std::string(cursor.Bytes(name_length));

    Cursor extra(cursor.Bytes(extra_length), 0);
    while (extra.position() + 4 <= extra_length) {
      const uint16_t id = extra.U16();
      const uint16_t size = extra.U16();
      Cursor field(extra.Bytes(size), 0);
      if (id != kZip64ExtraId) continue;
      if (entry.uncompressed_size == 0xFFFFFFFF) entry.uncompressed_size = field.U64();
      if (entry.compressed_size == 0xFFFFFFFF) entry.compressed_size = field.U64();
      if (entry.local_header_offset == 0xFFFFFFFF) entry.local_header_offset = field.U64();
    }
    cursor.Skip(comment_length);

    entry.encrypted = (flags & 0x1) != 0;
    entry.is_directory = !entry.name.empty() && (entry.name.back() == '/' || entry.name.back() == '\\');
    const bool unix_host = (made_by >> 8) == 3;
    entry.is_symlink = unix_host && ((external_attributes >> 16) & 0xF000) == 0xA000;
    entries_.push_back(std::move(entry));
  }
}

std::string Archive::Read(const Entry& entry) const {
  const std::string_view data = bytes_;
  Cursor local(data, entry.local_header_offset);
  if (local.U32() != kLocalHeaderSignature) Corrupt("bad local header for '" + entry.name + "'");
  local.Skip(kLocalHeaderSize - 4 - 4);
  const uint16_t name_length = local.U16();
  const uint16_t extra_length = local.U16();
  local.Skip(uint64_t{name_length} + extra_length);
  if (entry.encrypted) Corrupt("encrypted entry '" + entry.name + "' is not supported");
  const std::string_view payload = local.Bytes(entry.compressed_size);

  std::string contents;
  if (entry.method == 0) {
    if (entry.compressed_size != entry.uncompressed_size) Corrupt("stored entry size mismatch");
    contents.assign(payload);
  } else if (entry.method == 8) {
    contents = Inflate(payload, entry.uncompressed_size);
  } else {
    Corrupt("entry '" + entry.name + "' uses unsupported compression method " +
            std::to_string(entry.method));
  }
  const uLong crc =
      crc32_z(crc32_z(0L, Z_NULL, 0), reinterpret_cast<const Bytef*>(contents.data()), contents.size());
  if (crc != entry.crc32) Corrupt("CRC mismatch for '" + entry.name + "'");
  return contents;
}

std::optional<std::filesystem::path> ResolveEntryPath(std::string_view name) {
  std::string normalized(name);
  std::replace(normalized.begin(), normalized.end(), '\\', '/');
  if (!normalized.empty() && normalized.front() == '/') return std::nullopt;
  if (normalized.size() >= 2 && normalized[1] == ':') return std::nullopt;

  std::vector<std::string_view> segments;
  std::string_view rest = normalized;
  while (!rest.empty()) {
    const size_t slash = rest.find('/');
    const std::string_view segment = rest.substr(0, slash);
    rest = slash == std::string_view::npos ? std::string_view{} : rest.substr(slash + 1);
    if (segment.empty() || segment == ".") continue;
    if (segment == "..") {
      if (segments.empty()) return std::nullopt;
      segments.pop_back();
      continue;
    }
    segments.push_back(segment);
  }
  std::filesystem::path resolved;
  for (auto segment : segments) resolved /= std::filesystem::path(std::u8string(segment.begin(), segment.end()));
  return resolved;
}

void ExtractAll(const std::filesystem::path& archive_path, const std::filesystem::path& destination,
                const ExtractOptions& options) {
  const Archive archive = Archive::Open(archive_path);

  std::vector<std::filesystem::path> targets;
  targets.reserve(archive.entries().size());
  uint64_t total = 0;
  for (const auto& entry : archive.entries()) {
    const auto relative = ResolveEntryPath(entry.name);
    if (!relative) {
      throw Error(ErrorCode::kZipSlipRejected,
                  archive_path.string() + ": entry '" + entry.name + "' escapes the extraction root");
    }
    targets.push_back(*relative);
    if (!entry.is_directory && !entry.is_symlink) {
      total += entry.uncompressed_size;
      if (total > options.max_total_bytes) Corrupt("archive expands beyond the extraction limit");
    }
  }

  std::error_code ec;
  for (size_t i = 0; i < targets.size(); ++i) {
    const Entry& entry = archive.entries()[i];
    if (entry.is_symlink || targets[i].empty()) continue;
    const std::filesystem::path target = destination / targets[i];
    if (entry.is_directory) {
      std::filesystem::create_directories(target, ec);
      if (ec) throw Error(ErrorCode::kIo, target.string() + ": " + ec.message());
      continue;
    }
    std::filesystem::create_directories(target.parent_path(), ec);
    if (ec) throw Error(ErrorCode::kIo, target.parent_path().string() + ": " + ec.message());
    const std::string contents = archive.Read(entry);
    std::ofstream out(target, std::ios::binary | std::ios::trunc);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorCode::kIo, target.string() + ": write failed");
  }
}

}  // namespace nblint::zip
