#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nblint/python_syntax.hpp"

namespace nblint {

enum class CellKind { kCode, kMarkdown, kRaw };

std::string_view ToString(CellKind kind);

struct Cell {
  int index = 0;
  CellKind kind = CellKind::kCode;
  std::string source;
  // Only code cells carry a count; absent means the cell never ran.
  std::optional<int> execution_count;
};

struct Notebook {
  std::filesystem::path path;
  std::vector<Cell> cells;
  std::string language;
  int nbformat_major = 4;
  int nbformat_minor = 0;

  // Notebooks without kernel metadata are assumed to be Python.
  bool IsPython() const;
};

// Parses an nbformat >= 4 document. `path` is only used for labeling.
// Throws Error with kMalformedJson, kNotANotebook or kUnsupportedFormat.
Notebook ParseNotebook(std::string_view raw, const std::filesystem::path& path);

// Reads and parses a file. Throws kIo when the file cannot be read.
Notebook LoadNotebookFile(const std::filesystem::path& path);

// Every code cell's source followed by a single newline, in document order.
std::string NotebookScript(const Notebook& notebook);

struct CodeCellAnalysis {
  int cell_index = 0;
  // A cell magic such as %%bash: the body is not Python and is not analyzed.
  bool foreign = false;
  std::optional<python::SyntaxError> syntax_error;
  std::vector<python::TopLevelStatement> statements;
};

struct NotebookFacts {
  int code_cell_count = 0;
  int markdown_cell_count = 0;
  std::vector<int> heading_cell_indexes;
  // (cell index, execution count) for executed code cells.
  std::vector<std::pair<int, int>> executed_counts;
  std::vector<int> import_cell_indexes;
  std::vector<int> unparseable_cell_indexes;
  // One entry per code cell of a Python notebook; empty for other languages.
  std::vector<CodeCellAnalysis> code_cells;
};

NotebookFacts ComputeFacts(const Notebook& notebook);

// Level of the Markdown ATX heading on the first non-blank line of `text`,
// or 0 when that line is not a heading.
int LeadingHeadingLevel(std::string_view text);

// Number of lines in a cell source; a trailing newline does not start a line.
int CountLines(std::string_view text);

}  // namespace nblint
