#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nblint/notebook.hpp"
#include "nblint/project.hpp"

namespace nblint {

// Ordered by increasing severity.
enum class Severity { kInfo, kWarning, kError };

enum class Scope { kNotebook, kProject };

std::string_view ToString(Severity severity);
std::string_view ToString(Scope scope);
std::optional<Severity> ParseSeverity(std::string_view text);

struct RuleDescriptor {
  std::string id;  // kebab-case, unique in the registry
  Scope scope = Scope::kNotebook;
  Severity severity = Severity::kWarning;
  std::string title;
  std::string recommendation;
  // Skipped for notebooks whose kernel language is not Python.
  bool language_specific = false;
};

struct Thresholds {
  int max_cells_per_notebook = 50;
  int max_lines_per_code_cell = 30;
  int preview_lines = 10;
};

struct Finding {
  std::string rule_id;
  Severity severity = Severity::kInfo;
  std::string path;  // notebook path, or "." for the project itself
  std::optional<int> cell_index;
  std::string detail;
  std::string recommendation;
  // First Thresholds::preview_lines lines of the offending cell.
  std::optional<std::string> preview;
  bool preview_truncated = false;

  bool operator==(const Finding&) const = default;
};

// What a rule reports; the engine turns it into a Finding.
struct Violation {
  std::optional<int> cell_index;
  std::string detail;
};

struct NotebookView {
  std::string_view path;
  const Notebook& notebook;
  const NotebookFacts& facts;
  const Thresholds& thresholds;
};

struct ProjectView {
  const Project& project;
  const ProjectFacts& facts;
  const Thresholds& thresholds;
};

using NotebookCheck = std::function<std::vector<Violation>(const NotebookView&)>;
using ProjectCheck = std::function<std::vector<Violation>(const ProjectView&)>;

// Exactly one of the checks is set, matching descriptor.scope.
struct Rule {
  RuleDescriptor descriptor;
  NotebookCheck notebook_check;
  ProjectCheck project_check;
};

bool IsKebabCase(std::string_view id);

}  // namespace nblint
