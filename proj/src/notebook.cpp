#include "nblint/notebook.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nblint/error.hpp"

namespace nblint {

using nlohmann::json;

std::string_view ToString(CellKind kind) {
  switch (kind) {
    case CellKind::kCode:
      return "code";
    case CellKind::kMarkdown:
      return "markdown";
    case CellKind::kRaw:
      return "raw";
  }
  return "code";
}

bool Notebook::IsPython() const {
  if (language.empty()) return true;
  std::string lower;
  for (char c : language) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return lower == "python" || lower == "python3" || lower == "ipython";
}

namespace {

[[noreturn]] void NotANotebook(const std::filesystem::path& path, const std::string& why) {
  throw Error(ErrorCode::kNotANotebook, path.string() + ": not a notebook: " + why);
}

std::string JoinSource(const json& source, const std::filesystem::path& path, size_t index) {
  if (source.is_string()) return source.get<std::string>();
  if (!source.is_array()) {
    NotANotebook(path, "cell " + std::to_string(index) + " has a non-text source");
  }
  std::string joined;
  for (const auto& line : source) {
    if (!line.is_string()) {
      NotANotebook(path, "cell " + std::to_string(index) + " has a non-text source line");
    }
    joined += line.get_ref<const std::string&>();
  }
  return joined;
}

std::string KernelLanguage(const json& document) {
  const auto metadata = document.find("metadata");
  if (metadata == document.end() || !metadata->is_object()) return {};
  for (const auto& [section, key] : {std::pair{"kernelspec", "language"},
                                     std::pair{"language_info", "name"}}) {
    const auto block = metadata->find(section);
    if (block == metadata->end() || !block->is_object()) continue;
    const auto value = block->find(key);
    if (value != block->end() && value->is_string()) return value->get<std::string>();
  }
  return {};
}

}  // namespace

Notebook ParseNotebook(std::string_view raw, const std::filesystem::path& path) {
  json document;
  try {
    document = json::parse(raw.begin(), raw.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kMalformedJson, path.string() + ": malformed JSON: " + e.what());
  }
  if (!document.is_object()) NotANotebook(path, "top-level value is not an object");
  const auto cells = document.find("cells");
  const auto major = document.find("nbformat");
  if (cells == document.end() || !cells->is_array()) NotANotebook(path, "missing 'cells' array");
  if (major == document.end() || !major->is_number_integer()) {
    NotANotebook(path, "missing integer 'nbformat'");
  }

  Notebook notebook;
  notebook.path = path;
  notebook.nbformat_major = major->get<int>();
  if (notebook.nbformat_major < 4) {
    throw Error(ErrorCode::kUnsupportedFormat,
                path.string() + ": nbformat " + std::to_string(notebook.nbformat_major) +
                    " is not supported (version 4 or later required)");
  }
  if (const auto minor = document.find("nbformat_minor");
      minor != document.end() && minor->is_number_integer()) {
    notebook.nbformat_minor = minor->get<int>();
  }
  notebook.language = KernelLanguage(document);

  notebook.cells.reserve(cells->size());
  for (size_t i = 0; i < cells->size(); ++i) {
    const json& item = (*cells)[i];
    if (!item.is_object()) NotANotebook(path, "cell " + std::to_string(i) + " is not an object");
    const auto type = item.find("cell_type");
    if (type == item.end() || !type->is_string()) {
      NotANotebook(path, "cell " + std::to_string(i) + " has no cell_type");
    }
    Cell cell;
    cell.index = static_cast<int>(i);
    const auto& kind = type->get_ref<const std::string&>();
    if (kind == "code") {
      cell.kind = CellKind::kCode;
    } else if (kind == "markdown") {
      cell.kind = CellKind::kMarkdown;
    } else if (kind == "raw") {
      cell.kind = CellKind::kRaw;
    } else {
      NotANotebook(path, "cell " + std::to_string(i) + " has unknown cell_type '" + kind + "'");
    }
    const auto source = item.find("source");
    if (source != item.end()) cell.source = JoinSource(*source, path, i);
    if (cell.kind == CellKind::kCode) {
      const auto count = item.find("execution_count");
      if (count != item.end() && count->is_number_integer() && count->get<long long>() >= 0) {
        cell.execution_count = count->get<int>();
      }
    }
    notebook.cells.push_back(std::move(cell));
  }
  return notebook;
}

Notebook LoadNotebookFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, path.string() + ": cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kIo, path.string() + ": read failed");
  return ParseNotebook(buffer.str(), path);
}

std::string NotebookScript(const Notebook& notebook) {
  std::string script;
  for (const auto& cell : notebook.cells) {
    if (cell.kind != CellKind::kCode) continue;
    script += cell.source;
    script += '\n';
  }
  return script;
}

int LeadingHeadingLevel(std::string_view text) {
  size_t start = 0;
  while (start < text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (line.find_first_not_of(" \t\r") != std::string_view::npos) {
      // CommonMark tolerates up to three spaces of indentation.
      size_t indent = 0;
      while (indent < line.size() && indent < 3 && line[indent] == ' ') ++indent;
      line.remove_prefix(indent);
      size_t hashes = 0;
      while (hashes < line.size() && line[hashes] == '#') ++hashes;
      if (hashes >= 1 && hashes <= 6 && hashes < line.size() && line[hashes] == ' ') {
        return static_cast<int>(hashes);
      }
      return 0;
    }
    start = end + 1;
  }
  return 0;
}

int CountLines(std::string_view text) {
  if (text.empty()) return 0;
  int lines = static_cast<int>(std::count(text.begin(), text.end(), '\n'));
  if (text.back() != '\n') ++lines;
  return lines;
}

NotebookFacts ComputeFacts(const Notebook& notebook) {
  NotebookFacts facts;
  const bool python = notebook.IsPython();
  for (const auto& cell : notebook.cells) {
    switch (cell.kind) {
      case CellKind::kMarkdown:
        ++facts.markdown_cell_count;
        if (LeadingHeadingLevel(cell.source) > 0) facts.heading_cell_indexes.push_back(cell.index);
        break;
      case CellKind::kCode: {
        ++facts.code_cell_count;
        if (cell.execution_count) facts.executed_counts.emplace_back(cell.index, *cell.execution_count);
        if (!python) break;
        CodeCellAnalysis analysis;
        analysis.cell_index = cell.index;
        const python::StrippedCell stripped = python::StripMagics(cell.source);
        analysis.foreign = stripped.foreign;
        if (!stripped.foreign) {
          python::ParseResult parsed = python::Parse(stripped.text);
          analysis.syntax_error = std::move(parsed.error);
          analysis.statements = std::move(parsed.statements);
        }
        if (analysis.syntax_error) {
          facts.unparseable_cell_indexes.push_back(cell.index);
        } else if (std::any_of(analysis.statements.begin(), analysis.statements.end(),
                               [](const python::TopLevelStatement& s) {
                                 return s.kind == python::StatementKind::kImport;
                               })) {
          facts.import_cell_indexes.push_back(cell.index);
        }
        facts.code_cells.push_back(std::move(analysis));
        break;
      }
      case CellKind::kRaw:
        break;
    }
  }
  return facts;
}

}  // namespace nblint
