#include "nblint/engine.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <tuple>

#include "nblint/error.hpp"

namespace nblint {
namespace {

std::string Preview(const std::string& source, int max_lines, bool* truncated) {
  std::string out;
  size_t pos = 0;
  int lines = 0;
  *truncated = false;
  while (pos < source.size()) {
    if (lines == max_lines) {
      *truncated = true;
      break;
    }
    size_t end = source.find('\n', pos);
    if (end == std::string::npos) end = source.size();
    if (lines > 0) out += '\n';
    out.append(source, pos, end - pos);
    ++lines;
    pos = end + 1;
  }
  return out;
}

Finding CrashFinding(const Rule& rule, const std::string& path, const std::string& reason) {
  Finding f;
  f.rule_id = std::string(kRuleCrashedId);
  f.severity = Severity::kInfo;
  f.path = path;
  f.detail = "rule '" + rule.descriptor.id + "' failed: " + reason;
  f.recommendation = EngineDescriptors()[0].recommendation;
  return f;
}

void EvaluateNotebook(const Rule& rule, const AnalyzedNotebook& nb, const Thresholds& thresholds,
                      std::vector<Finding>& out) {
  NotebookView view{nb.relative_path, nb.notebook, nb.facts, thresholds};
  std::vector<Violation> violations;
  try {
    violations = rule.notebook_check(view);
  } catch (const std::exception& e) {
    out.push_back(CrashFinding(rule, nb.relative_path, e.what()));
    return;
  } catch (...) {
    out.push_back(CrashFinding(rule, nb.relative_path, "unknown exception"));
    return;
  }
  const int cell_count = static_cast<int>(nb.notebook.cells.size());
  for (const Violation& v : violations) {
    if (v.cell_index && (*v.cell_index < 0 || *v.cell_index >= cell_count)) {
      out.push_back(CrashFinding(rule, nb.relative_path,
                                 "reported nonexistent cell " + std::to_string(*v.cell_index)));
      return;
    }
  }
  for (Violation& v : violations) {
    Finding f;
    f.rule_id = rule.descriptor.id;
    f.severity = rule.descriptor.severity;
    f.path = nb.relative_path;
    f.cell_index = v.cell_index;
    f.detail = std::move(v.detail);
    f.recommendation = rule.descriptor.recommendation;
    if (f.cell_index) {
      bool truncated = false;
      f.preview = Preview(nb.notebook.cells[*f.cell_index].source, thresholds.preview_lines,
                          &truncated);
      f.preview_truncated = truncated;
    }
    out.push_back(std::move(f));
  }
}

void EvaluateProject(const Rule& rule, const Project& project, const Thresholds& thresholds,
                     std::vector<Finding>& out) {
  ProjectView view{project, project.facts, thresholds};
  std::vector<Violation> violations;
  try {
    violations = rule.project_check(view);
  } catch (const std::exception& e) {
    out.push_back(CrashFinding(rule, ".", e.what()));
    return;
  } catch (...) {
    out.push_back(CrashFinding(rule, ".", "unknown exception"));
    return;
  }
  for (Violation& v : violations) {
    Finding f;
    f.rule_id = rule.descriptor.id;
    f.severity = rule.descriptor.severity;
    f.path = ".";
    f.detail = std::move(v.detail);
    f.recommendation = rule.descriptor.recommendation;
    out.push_back(std::move(f));
  }
}

}  // namespace

const std::vector<RuleDescriptor>& EngineDescriptors() {
  static const std::vector<RuleDescriptor> descriptors = {
      {std::string(kRuleCrashedId), Scope::kNotebook, Severity::kInfo, "Rule evaluation failed",
       "Report the failure to the rule's author or exclude the rule.", false},
      {std::string(kNotebookUnreadableId), Scope::kNotebook, Severity::kError,
       "Notebook could not be read",
       "Repair the file so it is a valid nbformat 4 notebook, or remove it.", false},
      {std::string(kNotebookNonPythonId), Scope::kNotebook, Severity::kInfo,
       "Notebook is not written in Python",
       "Python-specific checks were skipped; review this notebook with a linter for its "
       "language.",
       false},
  };
  return descriptors;
}

void RuleRegistry::Add(Rule rule) {
  if (frozen_) throw std::logic_error("rule registry is frozen");
  const RuleDescriptor& d = rule.descriptor;
  if (!IsKebabCase(d.id)) {
    throw Error(ErrorCode::kPluginLoad, "rule id '" + d.id + "' is not kebab-case");
  }
  if (d.recommendation.empty()) {
    throw Error(ErrorCode::kPluginLoad, "rule '" + d.id + "' has no recommendation");
  }
  bool has_check = d.scope == Scope::kNotebook ? static_cast<bool>(rule.notebook_check)
                                               : static_cast<bool>(rule.project_check);
  if (!has_check) {
    throw Error(ErrorCode::kPluginLoad, "rule '" + d.id + "' has no check for its scope");
  }
  bool reserved = std::any_of(EngineDescriptors().begin(), EngineDescriptors().end(),
                              [&](const RuleDescriptor& e) { return e.id == d.id; });
  if (reserved || Contains(d.id)) {
    throw Error(ErrorCode::kDuplicateRuleId, "duplicate rule id '" + d.id + "'");
  }
  rules_.push_back(std::make_unique<Rule>(std::move(rule)));
}

const Rule* RuleRegistry::Find(std::string_view id) const {
  for (const auto& rule : rules_) {
    if (rule->descriptor.id == id) return rule.get();
  }
  return nullptr;
}

std::vector<const Rule*> RuleRegistry::rules() const {
  std::vector<const Rule*> out;
  out.reserve(rules_.size());
  for (const auto& rule : rules_) out.push_back(rule.get());
  std::sort(out.begin(), out.end(), [](const Rule* a, const Rule* b) {
    return a->descriptor.id < b->descriptor.id;
  });
  return out;
}

std::string_view ToString(FailLevel level) {
  switch (level) {
    case FailLevel::kError:
      return "error";
    case FailLevel::kWarning:
      return "warning";
    case FailLevel::kInfo:
      return "info";
    case FailLevel::kNever:
      return "never";
  }
  return "warning";
}

std::optional<FailLevel> ParseFailLevel(std::string_view text) {
  if (text == "error") return FailLevel::kError;
  if (text == "warning") return FailLevel::kWarning;
  if (text == "info") return FailLevel::kInfo;
  if (text == "never") return FailLevel::kNever;
  return std::nullopt;
}

std::vector<const Rule*> SelectRules(const RuleRegistry& registry, const RuleSelection& selection) {
  auto check_known = [&](const std::string& id) {
    if (!registry.Contains(id)) throw Error(ErrorCode::kUnknownRuleId, "unknown rule id '" + id + "'");
  };
  std::set<std::string> excluded;
  for (const auto& id : selection.exclude) {
    check_known(id);
    excluded.insert(id);
  }
  std::set<std::string> included;
  if (selection.include) {
    for (const auto& id : *selection.include) {
      check_known(id);
      if (excluded.count(id)) {
        throw Error(ErrorCode::kInvalidValue,
                    "rule id '" + id + "' is both included and excluded");
      }
      included.insert(id);
    }
  }
  std::vector<const Rule*> out;
  for (const Rule* rule : registry.rules()) {
    const std::string& id = rule->descriptor.id;
    if (selection.include && !included.count(id)) continue;
    if (excluded.count(id)) continue;
    out.push_back(rule);
  }
  return out;
}

std::vector<Finding> Run(const Project& project, const std::vector<const Rule*>& rules,
                         const Thresholds& thresholds) {
  std::vector<Finding> findings;
  for (const Rule* rule : rules) {
    if (rule->descriptor.scope == Scope::kProject) {
      if (project.origin == Origin::kStandaloneNotebook || !project.facts.applicable) continue;
      EvaluateProject(*rule, project, thresholds, findings);
      continue;
    }
    for (const AnalyzedNotebook& nb : project.notebooks) {
      if (rule->descriptor.language_specific && !nb.notebook.IsPython()) continue;
      EvaluateNotebook(*rule, nb, thresholds, findings);
    }
  }
  SortFindings(findings);
  return findings;
}

std::vector<Finding> ProjectNotices(const Project& project) {
  std::vector<Finding> out;
  const auto& unreadable = EngineDescriptors()[1];
  const auto& non_python = EngineDescriptors()[2];
  for (const LoadIssue& issue : project.issues) {
    Finding f;
    f.rule_id = unreadable.id;
    f.severity = unreadable.severity;
    f.path = issue.relative_path;
    f.detail = std::string(ToString(issue.code)) + ": " + issue.message;
    f.recommendation = unreadable.recommendation;
    out.push_back(std::move(f));
  }
  for (const AnalyzedNotebook& nb : project.notebooks) {
    if (nb.notebook.IsPython()) continue;
    Finding f;
    f.rule_id = non_python.id;
    f.severity = non_python.severity;
    f.path = nb.relative_path;
    f.detail = "kernel language is '" + nb.notebook.language + "'";
    f.recommendation = non_python.recommendation;
    out.push_back(std::move(f));
  }
  SortFindings(out);
  return out;
}

void SortFindings(std::vector<Finding>& findings) {
  auto key = [](const Finding& f) {
    return std::make_tuple(std::cref(f.path), !f.cell_index.has_value(), f.cell_index.value_or(0),
                           std::cref(f.rule_id), std::cref(f.detail));
  };
  std::stable_sort(findings.begin(), findings.end(),
                   [&](const Finding& a, const Finding& b) { return key(a) < key(b); });
}

}  // namespace nblint
