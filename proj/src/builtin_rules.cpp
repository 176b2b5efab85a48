#include "nblint/builtin_rules.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <regex>
#include <string>

namespace nblint {
namespace {

using Violations = std::vector<Violation>;

std::string Join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::string FileName(std::string_view path) {
  return std::filesystem::path(std::string(path)).filename().string();
}

bool IsBlank(std::string_view text) {
  return text.find_first_not_of(" \t\r\n\f\v") == std::string_view::npos;
}

// --- project scope ---

Violations VersionControl(const ProjectView& v) {
  if (v.facts.is_version_controlled || v.facts.version_control_satisfied_by_origin) return {};
  return {{std::nullopt, "no .git directory at the project root"}};
}

Violations Dependencies(const ProjectView& v) {
  if (!v.facts.dependency_files.empty()) return {};
  return {{std::nullopt, "no dependency manifest at the project root; accepted files: " +
                             Join(DiscoveryOptions{}.dependency_files, ", ")}};
}

Violations Tests(const ProjectView& v) {
  if (!v.facts.test_paths.empty()) return {};
  return {{std::nullopt, "no test directory (tests/ or test/) and no test_* source files"}};
}

Violations DataVersioning(const ProjectView& v) {
  if (!v.facts.dvc_artifacts.empty()) return {};
  return {{std::nullopt, "no DVC artifacts (.dvc directory, dvc.yaml, dvc.lock or *.dvc files)"}};
}

Violations DuplicateNames(const ProjectView& v) {
  Violations out;
  for (const DuplicateName& dup : v.facts.duplicate_notebook_names) {
    out.push_back({std::nullopt, "'" + dup.filename + "' is used by " +
                                     std::to_string(dup.paths.size()) +
                                     " notebooks: " + Join(dup.paths, ", ")});
  }
  return out;
}

// --- notebook scope ---

Violations Untitled(const NotebookView& v) {
  static const std::regex pattern("Untitled[0-9]*");
  std::string stem = std::filesystem::path(std::string(v.path)).stem().string();
  if (!std::regex_match(stem, pattern)) return {};
  return {{std::nullopt, "notebook keeps the default name '" + FileName(v.path) + "'"}};
}

Violations FilenameCharset(const NotebookView& v) {
  std::string name = FileName(v.path);
  for (unsigned char c : name) {
    bool ok = std::isalnum(c) && c < 0x80;
    if (!ok && c != '.' && c != '_' && c != '-') {
      return {{std::nullopt,
               "file name '" + name + "' contains characters outside [A-Za-z0-9._-]"}};
    }
  }
  return {};
}

Violations MarkdownTitle(const NotebookView& v) {
  const auto& cells = v.notebook.cells;
  if (cells.empty()) return {{std::nullopt, "notebook is empty and has no title"}};
  const Cell& first = cells.front();
  if (first.kind == CellKind::kMarkdown && LeadingHeadingLevel(first.source) == 1) return {};
  if (first.kind != CellKind::kMarkdown) {
    return {{0, "first cell is a " + std::string(ToString(first.kind)) +
                    " cell, not a Markdown title"}};
  }
  return {{0, "first Markdown cell does not start with a level-1 heading"}};
}

Violations MarkdownStructure(const NotebookView& v) {
  int total = static_cast<int>(v.notebook.cells.size());
  int gate = std::max(5, (total + 9) / 10);
  if (v.facts.code_cell_count < gate) return {};
  for (int index : v.facts.heading_cell_indexes) {
    if (index != 0) return {};
  }
  return {{std::nullopt, std::to_string(v.facts.code_cell_count) +
                             " code cells and no Markdown headings beyond the title"}};
}

Violations LinearExecution(const NotebookView& v) {
  const auto& counts = v.facts.executed_counts;
  for (size_t i = 1; i < counts.size(); ++i) {
    auto [prev_cell, prev_count] = counts[i - 1];
    auto [cell, count] = counts[i];
    if (count <= prev_count) {
      return {{cell, "cell " + std::to_string(prev_cell) + " (execution count " +
                         std::to_string(prev_count) + ") precedes cell " + std::to_string(cell) +
                         " (execution count " + std::to_string(count) + ")"}};
    }
  }
  return {};
}

Violations UnexecutedCells(const NotebookView& v) {
  if (v.facts.executed_counts.empty()) return {};
  Violations out;
  for (const Cell& c : v.notebook.cells) {
    if (c.kind != CellKind::kCode || c.execution_count || IsBlank(c.source)) continue;
    out.push_back({c.index, "code cell was never executed"});
  }
  return out;
}

Violations ImportsAtTop(const NotebookView& v) {
  Violations out;
  bool code_seen = false;
  for (const CodeCellAnalysis& cell : v.facts.code_cells) {
    if (cell.foreign || cell.syntax_error) continue;
    if (code_seen) {
      for (const auto& st : cell.statements) {
        if (st.kind != python::StatementKind::kImport) continue;
        out.push_back({cell.cell_index, "import on line " + std::to_string(st.line) +
                                            " follows executable code; PEP 8 places imports at "
                                            "the top of the module"});
      }
    }
    for (const auto& st : cell.statements) {
      if (st.kind == python::StatementKind::kOther) code_seen = true;
    }
  }
  return out;
}

Violations SyntaxErrors(const NotebookView& v) {
  Violations out;
  for (const CodeCellAnalysis& cell : v.facts.code_cells) {
    if (!cell.syntax_error) continue;
    const auto& e = *cell.syntax_error;
    out.push_back({cell.cell_index, "line " + std::to_string(e.line) + ", column " +
                                        std::to_string(e.column + 1) + ": " + e.message});
  }
  return out;
}

Violations TooManyCells(const NotebookView& v) {
  int total = static_cast<int>(v.notebook.cells.size());
  if (total <= v.thresholds.max_cells_per_notebook) return {};
  return {{std::nullopt, std::to_string(total) + " cells, more than the limit of " +
                             std::to_string(v.thresholds.max_cells_per_notebook)}};
}

Violations LongCodeCell(const NotebookView& v) {
  Violations out;
  for (const Cell& c : v.notebook.cells) {
    if (c.kind != CellKind::kCode) continue;
    int lines = CountLines(c.source);
    if (lines > v.thresholds.max_lines_per_code_cell) {
      out.push_back({c.index, std::to_string(lines) + " lines, more than the limit of " +
                                  std::to_string(v.thresholds.max_lines_per_code_cell)});
    }
  }
  return out;
}

Rule ProjectRule(std::string_view id, Severity severity, std::string title,
                 std::string recommendation, ProjectCheck check) {
  Rule r;
  r.descriptor = {std::string(id), Scope::kProject, severity, std::move(title),
                  std::move(recommendation), false};
  r.project_check = std::move(check);
  return r;
}

Rule NotebookRule(std::string_view id, Severity severity, std::string title,
                  std::string recommendation, NotebookCheck check, bool language_specific = false) {
  Rule r;
  r.descriptor = {std::string(id), Scope::kNotebook, severity, std::move(title),
                  std::move(recommendation), language_specific};
  r.notebook_check = std::move(check);
  return r;
}

}  // namespace

void RegisterBuiltinRules(RuleRegistry& registry) {
  using namespace rule_ids;
  registry.Add(ProjectRule(kRepoVersionControl, Severity::kError, "Use version control",
                           "Put the project under version control, for example with git init.",
                           VersionControl));
  registry.Add(ProjectRule(kRepoDependencies, Severity::kWarning, "Manage project dependencies",
                           "Declare the project's dependencies in a manifest such as "
                           "requirements.txt or pyproject.toml.",
                           Dependencies));
  registry.Add(ProjectRule(kRepoTests, Severity::kWarning, "Test your code",
                           "Move reusable code into modules and cover it with tests under a tests/ "
                           "directory.",
                           Tests));
  registry.Add(ProjectRule(kRepoDataVersioning, Severity::kInfo, "Make your data available",
                           "Adopt data version control, for example DVC, so the data behind the "
                           "notebooks can be retrieved.",
                           DataVersioning));
  registry.Add(ProjectRule(kRepoDuplicateNotebookNames, Severity::kWarning,
                           "Notebook file names are unique",
                           "Rename the notebooks so each file name identifies one notebook.",
                           DuplicateNames));
  registry.Add(NotebookRule(kUntitled, Severity::kWarning, "Notebook has a meaningful name",
                            "Rename the notebook after what it does.", Untitled));
  registry.Add(NotebookRule(kFilenameCharset, Severity::kInfo, "Portable notebook file name",
                            "Use only letters, digits, dots, hyphens and underscores in the file "
                            "name.",
                            FilenameCharset));
  registry.Add(NotebookRule(kMarkdownTitle, Severity::kWarning, "Notebook starts with a title",
                            "Start the notebook with a Markdown cell holding a level-1 heading.",
                            MarkdownTitle));
  registry.Add(NotebookRule(kMarkdownStructure, Severity::kInfo,
                            "Leverage Markdown headings to structure your notebook",
                            "Split the notebook into sections with Markdown headings.",
                            MarkdownStructure));
  registry.Add(NotebookRule(kLinearExecution, Severity::kWarning, "Cells ran in document order",
                            "Restart the kernel and run all cells from top to bottom.",
                            LinearExecution));
  registry.Add(NotebookRule(kUnexecutedCells, Severity::kInfo, "All code cells were executed",
                            "Run every code cell or remove the ones that are not needed.",
                            UnexecutedCells));
  registry.Add(NotebookRule(kImportsAtTop, Severity::kWarning, "Imports are at the top",
                            "Move import statements into the first code cells of the notebook.",
                            ImportsAtTop, true));
  registry.Add(NotebookRule(kSyntaxErrors, Severity::kError, "Code cells are valid Python",
                            "Fix the syntax error or delete the broken cell.", SyntaxErrors,
                            true));
  registry.Add(NotebookRule(kTooManyCells, Severity::kInfo, "Notebook is of manageable size",
                            "Split the notebook or move code into modules.", TooManyCells));
  registry.Add(NotebookRule(kLongCodeCell, Severity::kInfo, "Code cells are short",
                            "Break the cell up or move its logic into functions.", LongCodeCell));
}

RuleRegistry BuiltinRegistry() {
  RuleRegistry registry;
  RegisterBuiltinRules(registry);
  return registry;
}

}  // namespace nblint
