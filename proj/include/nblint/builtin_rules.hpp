#pragma once

#include <string_view>

#include "nblint/engine.hpp"

namespace nblint {

namespace rule_ids {
inline constexpr std::string_view kRepoVersionControl = "repo-version-control";
inline constexpr std::string_view kRepoDependencies = "repo-dependencies";
inline constexpr std::string_view kRepoTests = "repo-tests";
inline constexpr std::string_view kRepoDataVersioning = "repo-data-versioning";
inline constexpr std::string_view kRepoDuplicateNotebookNames = "repo-duplicate-notebook-names";
inline constexpr std::string_view kUntitled = "notebook-untitled";
inline constexpr std::string_view kFilenameCharset = "notebook-filename-charset";
inline constexpr std::string_view kMarkdownTitle = "notebook-markdown-title";
inline constexpr std::string_view kMarkdownStructure = "notebook-markdown-structure";
inline constexpr std::string_view kLinearExecution = "notebook-linear-execution";
inline constexpr std::string_view kUnexecutedCells = "notebook-unexecuted-cells";
inline constexpr std::string_view kImportsAtTop = "notebook-imports-at-top";
inline constexpr std::string_view kSyntaxErrors = "notebook-syntax-errors";
inline constexpr std::string_view kTooManyCells = "notebook-too-many-cells";
inline constexpr std::string_view kLongCodeCell = "notebook-long-code-cell";
}  // namespace rule_ids

void RegisterBuiltinRules(RuleRegistry& registry);

// A registry holding only the built-in rules, not yet frozen.
RuleRegistry BuiltinRegistry();

}  // namespace nblint
