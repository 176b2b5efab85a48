#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nblint/engine.hpp"
#include "nblint/project.hpp"

namespace nblint {

inline constexpr std::string_view kToolVersion = "0.1.0";

struct RuleCatalogEntry {
  std::string id;
  std::string title;

  bool operator==(const RuleCatalogEntry&) const = default;
};

struct SeveritySummary {
  int error = 0;
  int warning = 0;
  int info = 0;

  int total() const { return error + warning + info; }
  bool operator==(const SeveritySummary&) const = default;
};

SeveritySummary Summarize(const std::vector<Finding>& findings);

struct Report {
  std::string tool_version{kToolVersion};
  std::string target;  // path or URL as given by the user
  int analyzed_notebook_count = 0;
  std::vector<std::string> notebooks;  // analyzed notebook paths, sorted
  std::vector<Finding> findings;       // in engine order
  SeveritySummary summary;
  std::vector<RuleCatalogEntry> rule_catalog;  // rules that ran, sorted by id
  // False for standalone notebooks, which have no project section.
  bool project_scope = true;
  std::optional<std::string> generated_at;  // opt-in timestamp
};

// Assembles a report from engine output. Engine notices appearing in
// `findings` are added to the catalog.
Report MakeReport(std::string target, const Project& project, std::vector<Finding> findings,
                  const std::vector<const Rule*>& rules);

std::string RenderTerminal(const Report& report, bool use_color);
std::string RenderMarkdown(const Report& report);

// Fixed schema and key order:
// {"version", "target", "notebooks_analyzed",
//  "findings": [{"rule", "severity", "path", "cell", "detail", "recommendation"}],
//  "summary": {"error", "warning", "info"}}
std::string RenderJson(const Report& report);

// Reads RenderJson output back. Only the fields carried by the JSON document
// are filled in. Throws kMalformedJson when the document does not match the
// schema.
Report ParseJsonReport(std::string_view json);

// 1 when some finding is at or above fail_level, 0 otherwise.
int ExitStatus(const Report& report, FailLevel fail_level);

}  // namespace nblint
