#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nblint/rule.hpp"

namespace nblint {

inline constexpr std::string_view kRuleCrashedId = "engine-rule-crashed";
inline constexpr std::string_view kNotebookUnreadableId = "engine-notebook-unreadable";
inline constexpr std::string_view kNotebookNonPythonId = "engine-notebook-non-python";

// Descriptors for the findings the engine itself emits. They are not
// registered rules and cannot be selected.
const std::vector<RuleDescriptor>& EngineDescriptors();

class RuleRegistry {
 public:
  // Throws kDuplicateRuleId on an id collision, kPluginLoad for a malformed
  // descriptor, std::logic_error once frozen.
  void Add(Rule rule);

  // Keeps a plugin's shared library loaded as long as the registry lives.
  void Retain(std::shared_ptr<void> resource) { resources_.push_back(std::move(resource)); }

  void Freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }

  const Rule* Find(std::string_view id) const;
  bool Contains(std::string_view id) const { return Find(id) != nullptr; }

  // All rules sorted by id.
  std::vector<const Rule*> rules() const;
  size_t size() const { return rules_.size(); }

 private:
  std::vector<std::unique_ptr<Rule>> rules_;
  std::vector<std::shared_ptr<void>> resources_;
  bool frozen_ = false;
};

enum class FailLevel { kError, kWarning, kInfo, kNever };

std::string_view ToString(FailLevel level);
std::optional<FailLevel> ParseFailLevel(std::string_view text);

struct RuleSelection {
  std::optional<std::vector<std::string>> include;
  std::vector<std::string> exclude;
  FailLevel fail_level = FailLevel::kWarning;
};

// Include filter first, then exclusions; sorted by id. Throws kUnknownRuleId
// for ids missing from the registry and kInvalidValue when include and
// exclude overlap.
std::vector<const Rule*> SelectRules(const RuleRegistry& registry, const RuleSelection& selection);

// Evaluates the rules over the project. A rule that throws or reports a cell
// outside its notebook yields one engine-rule-crashed finding for that target
// instead of its own findings. Output is sorted with SortFindings.
std::vector<Finding> Run(const Project& project, const std::vector<const Rule*>& rules,
                         const Thresholds& thresholds = {});

// Findings about the inputs themselves: unparseable notebooks found during
// discovery and notebooks skipped by language-specific rules.
std::vector<Finding> ProjectNotices(const Project& project);

// Orders by path, then cell index (absent last), then rule id, then detail.
void SortFindings(std::vector<Finding>& findings);

}  // namespace nblint
