#include "fixtures.hpp"

#include <zlib.h>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#ifndef NBLINT_TEST_BINARY_DIR
#define NBLINT_TEST_BINARY_DIR "."
#endif

namespace nblint::testing {

std::string NotebookJson(const std::vector<CellSpec>& cells, const std::string& language) {
  nlohmann::ordered_json doc;
  nlohmann::ordered_json jcells = nlohmann::ordered_json::array();
  for (const CellSpec& c : cells) {
    nlohmann::ordered_json cell;
    cell["cell_type"] = c.kind;
    if (c.kind == "code") {
      cell["execution_count"] = c.execution_count ? nlohmann::ordered_json(*c.execution_count)
                                                  : nlohmann::ordered_json(nullptr);
      cell["outputs"] = nlohmann::ordered_json::array();
    }
    cell["metadata"] = nlohmann::ordered_json::object();
    nlohmann::ordered_json lines = nlohmann::ordered_json::array();
    size_t pos = 0;
    while (pos < c.source.size()) {
      size_t end = c.source.find('\n', pos);
      end = end == std::string::npos ? c.source.size() : end + 1;
      lines.push_back(c.source.substr(pos, end - pos));
      pos = end;
    }
    cell["source"] = lines;
    jcells.push_back(cell);
  }
  doc["cells"] = jcells;
  doc["metadata"]["kernelspec"] = {{"display_name", language},
                                   {"language", language},
                                   {"name", language}};
  doc["nbformat"] = 4;
  doc["nbformat_minor"] = 5;
  return doc.dump(1);
}

void WriteFile(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void MakeTree(const fs::path& root, const std::vector<std::pair<std::string, std::string>>& files) {
  fs::create_directories(root);
  for (const auto& [rel, content] : files) {
    if (!rel.empty() && rel.back() == '/') {
      fs::create_directories(root / rel);
    } else {
      WriteFile(root / rel, content);
    }
  }
}

namespace {

void Put16(std::string& out, uint32_t v) {
  out += static_cast<char>(v & 0xFF);
  out += static_cast<char>((v >> 8) & 0xFF);
}

void Put32(std::string& out, uint32_t v) {
  Put16(out, v & 0xFFFF);
  Put16(out, v >> 16);
}

std::string RawDeflate(const std::string& data) {
  z_stream zs{};
  if (deflateInit2(&zs, Z_BEST_COMPRESSION, Z_DEFLATED, -15, 8, Z_DEFAULT_STRATEGY) != Z_OK) {
    throw std::runtime_error("deflateInit2 failed");
  }
  std::string out(deflateBound(&zs, data.size()) + 16, '\0');
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
  zs.avail_in = static_cast<uInt>(data.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  int rc = deflate(&zs, Z_FINISH);
  deflateEnd(&zs);
  if (rc != Z_STREAM_END) throw std::runtime_error("deflate failed");
  out.resize(zs.total_out);
  return out;
}

uint32_t Crc(const std::string& data) {
  return static_cast<uint32_t>(
      crc32(0, reinterpret_cast<const Bytef*>(data.data()), static_cast<uInt>(data.size())));
}

}  // namespace

void ZipWriter::AddFile(const std::string& name, const std::string& data, bool deflate) {
  Item item{name, deflate ? RawDeflate(data) : data, static_cast<uint16_t>(deflate ? 8 : 0),
            Crc(data), static_cast<uint32_t>(data.size()), 0100644u << 16, 0x031E};
  items_.push_back(std::move(item));
}

void ZipWriter::AddDirectory(const std::string& name) {
  std::string n = name.empty() || name.back() == '/' ? name : name + "/";
  items_.push_back({n, "", 0, 0, 0, (040755u << 16) | 0x10, 0x031E});
}

void ZipWriter::AddSymlink(const std::string& name, const std::string& target) {
  items_.push_back({name, target, 0, Crc(target), static_cast<uint32_t>(target.size()),
                    0120777u << 16, 0x031E});
}

std::string ZipWriter::Finish() const {
  std::string out;
  std::string central;
  for (const Item& item : items_) {
    uint32_t offset = static_cast<uint32_t>(out.size());
    Put32(out, 0x04034b50);
    Put16(out, 20);
    Put16(out, 0x0800);  // UTF-8 names
    Put16(out, item.method);
    Put16(out, 0);
    Put16(out, 0x21);
    Put32(out, item.crc);
    Put32(out, static_cast<uint32_t>(item.stored.size()));
    Put32(out, item.size);
    Put16(out, static_cast<uint32_t>(item.name.size()));
    Put16(out, 0);
    out += item.name;
    out += item.stored;

    Put32(central, 0x02014b50);
    Put16(central, item.version_made_by);
    Put16(central, 20);
    Put16(central, 0x0800);
    Put16(central, item.method);
    Put16(central, 0);
    Put16(central, 0x21);
    Put32(central, item.crc);
    Put32(central, static_cast<uint32_t>(item.stored.size()));
    Put32(central, item.size);
    Put16(central, static_cast<uint32_t>(item.name.size()));
    Put16(central, 0);
    Put16(central, 0);
    Put16(central, 0);
    Put16(central, 0);
    Put32(central, item.external_attributes);
    Put32(central, offset);
    central += item.name;
  }
  uint32_t central_offset = static_cast<uint32_t>(out.size());
  out += central;
  Put32(out, 0x06054b50);
  Put16(out, 0);
  Put16(out, 0);
  Put16(out, static_cast<uint32_t>(items_.size()));
  Put16(out, static_cast<uint32_t>(items_.size()));
  Put32(out, static_cast<uint32_t>(central.size()));
  Put32(out, central_offset);
  Put16(out, 0);
  return out;
}

void ZipDirectory(const fs::path& dir, const fs::path& zip_path, const std::string& prefix) {
  ZipWriter writer;
  if (!prefix.empty()) writer.AddDirectory(prefix);
  std::vector<fs::path> paths;
  for (auto it = fs::recursive_directory_iterator(dir); it != fs::recursive_directory_iterator();
       ++it) {
    paths.push_back(it->path());
  }
  std::sort(paths.begin(), paths.end());
  for (const fs::path& p : paths) {
    std::string rel = prefix + fs::relative(p, dir).generic_string();
    if (fs::is_directory(p)) {
      writer.AddDirectory(rel);
    } else {
      writer.AddFile(rel, ReadFile(p));
    }
  }
  WriteFile(zip_path, writer.Finish());
}

fs::path BuildArtifact(const std::string& name) { return fs::path(NBLINT_TEST_BINARY_DIR) / name; }

}  // namespace nblint::testing
