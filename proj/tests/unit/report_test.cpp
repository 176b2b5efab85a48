#include <doctest.h>

#include <nlohmann/json.hpp>

#include "fixtures.hpp"
#include "nblint/builtin_rules.hpp"
#include "nblint/error.hpp"
#include "nblint/report.hpp"

using namespace nblint;
using nblint::testing::Code;
using nblint::testing::MakeTree;
using nblint::testing::Md;
using nblint::testing::NotebookJson;

namespace {

Finding MakeFinding(std::string rule, Severity severity, std::string path, std::optional<int> cell,
                    std::string detail) {
  Finding f;
  f.rule_id = std::move(rule);
  f.severity = severity;
  f.path = std::move(path);
  f.cell_index = cell;
  f.detail = std::move(detail);
  f.recommendation = "Do the right thing.";
  if (cell) f.preview = "x = 1";
  return f;
}

Report SampleReport() {
  Report r;
  r.target = "fixtures/repo";
  r.analyzed_notebook_count = 2;
  r.notebooks = {"a.ipynb", "sub/b.ipynb"};
  r.findings = {
      MakeFinding("notebook-syntax-errors", Severity::kError, "a.ipynb", 1, "line 1: bad | pipe"),
      MakeFinding("notebook-untitled", Severity::kWarning, "a.ipynb", std::nullopt, "named *x*"),
      MakeFinding("repo-tests", Severity::kWarning, ".", std::nullopt, "no tests"),
  };
  r.summary = Summarize(r.findings);
  r.rule_catalog = {{"notebook-syntax-errors", "Code cells are valid Python"},
                    {"notebook-untitled", "Notebook has a meaningful name"},
                    {"repo-tests", "Test your code"}};
  return r;
}

Report WithSeverities(std::vector<Severity> severities) {
  Report r;
  for (Severity s : severities) r.findings.push_back(MakeFinding("r", s, ".", std::nullopt, "d"));
  r.summary = Summarize(r.findings);
  return r;
}

int Count(const std::string& haystack, const std::string& needle) {
  int n = 0;
  for (size_t at = haystack.find(needle); at != std::string::npos;
       at = haystack.find(needle, at + needle.size())) {
    ++n;
  }
  return n;
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("terminal: empty report") {
  Report r;
  r.target = ".";
  r.analyzed_notebook_count = 4;
  std::string out = RenderTerminal(r, false);
  CHECK(out.find("0 findings") != std::string::npos);
  CHECK(out.find("4 analyzed notebooks") != std::string::npos);
}

TEST_CASE("terminal: sections, titles, recommendations, summary") {
  std::string out = RenderTerminal(SampleReport(), false);
  size_t a = out.find("\na.ipynb\n");
  size_t b = out.find("\nsub/b.ipynb\n");
  size_t project = out.find("\nproject\n");
  REQUIRE(a != std::string::npos);
  REQUIRE(b != std::string::npos);
  REQUIRE(project != std::string::npos);
  CHECK(a < b);
  CHECK(b < project);
  CHECK(out.find("Code cells are valid Python") != std::string::npos);
  CHECK(out.find("-> Do the right thing.") != std::string::npos);
  CHECK(out.find("cell 1: line 1: bad | pipe") != std::string::npos);
  CHECK(out.find("| x = 1") != std::string::npos);
  CHECK(out.find("3 findings (1 error, 2 warnings, 0 info)") != std::string::npos);
  CHECK(out.find('\x1b') == std::string::npos);
}

TEST_CASE("terminal: preview truncation from an 11-line cell") {
  auto tmp = TempDir::Create("report-test");
  std::string cell;
  for (int i = 1; i <= 11; ++i) cell += "line_" + std::to_string(i) + " = " + std::to_string(i) + "\n";
  MakeTree(tmp->path(), {{"n.ipynb", NotebookJson({Code(cell + "def f(:")})}});
  RuleRegistry registry = BuiltinRegistry();
  RuleSelection sel;
  sel.include = std::vector<std::string>{"notebook-syntax-errors"};
  auto rules = SelectRules(registry, sel);
  Project project = LoadDirectory(tmp->path());
  Report r = MakeReport("t", project, Run(project, rules), rules);
  std::string out = RenderTerminal(r, false);
  for (int i = 1; i <= 10; ++i) {
    CHECK(out.find("| line_" + std::to_string(i) + " = ") != std::string::npos);
  }
  CHECK(out.find("line_11") == std::string::npos);
  CHECK(Count(out, "(preview truncated)") == 1);
}

TEST_CASE("terminal: color") {
  std::string colored = RenderTerminal(SampleReport(), true);
  CHECK(colored.find("\x1b[") != std::string::npos);
  CHECK(colored.find("\x1b[0m") != std::string::npos);
}

TEST_CASE("terminal: standalone reports have no project section") {
  Report r = SampleReport();
  r.findings.pop_back();
  r.summary = Summarize(r.findings);
  r.project_scope = false;
  CHECK(RenderTerminal(r, false).find("\nproject\n") == std::string::npos);
}

TEST_CASE("markdown: empty report") {
  Report r;
  r.target = ".";
  std::string md = RenderMarkdown(r);
  CHECK(md.rfind("# ", 0) == 0);
  CHECK(md.find("No violations detected.") != std::string::npos);
  CHECK(md.find("## Summary") != std::string::npos);
}

TEST_CASE("markdown: layout") {
  std::string md = RenderMarkdown(SampleReport());
  CHECK(Count(md, "\n# ") + (md.rfind("# ", 0) == 0) == 1);
  CHECK(md.find("## a.ipynb\n") != std::string::npos);
  CHECK(md.find("## sub/b.ipynb\n") != std::string::npos);
  CHECK(md.find("## Project\n") != std::string::npos);
  CHECK(Count(md, "| Rule | Severity | Cell | Detail | Recommendation |") == 2);
  CHECK(md.find("line 1: bad \\| pipe") != std::string::npos);
  CHECK(md.find("named \\*x\\*") != std::string::npos);
  CHECK(md.find("```\nx = 1\n```") != std::string::npos);
  CHECK(md.find("Generated") == std::string::npos);
  Report stamped = SampleReport();
  stamped.generated_at = "2026-01-02T03:04:05Z";
  CHECK(RenderMarkdown(stamped).find("2026-01-02T03:04:05Z") != std::string::npos);
}

TEST_CASE("markdown: fences outgrow backticks in the preview") {
  Report r = SampleReport();
  r.findings[0].preview = "s = '```'\nt = '````'";
  std::string md = RenderMarkdown(r);
  CHECK(md.find("`````\ns = '```'\nt = '````'\n`````") != std::string::npos);
}

TEST_CASE("json: schema and key order") {
  std::string text = RenderJson(SampleReport());
  auto doc = nlohmann::ordered_json::parse(text);
  std::vector<std::string> keys;
  for (auto it = doc.begin(); it != doc.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"version", "target", "notebooks_analyzed", "findings",
                                         "summary"});
  CHECK(doc["version"] == "0.1.0");
  REQUIRE(doc["findings"].size() == 3);
  std::vector<std::string> fkeys;
  for (auto it = doc["findings"][0].begin(); it != doc["findings"][0].end(); ++it) {
    fkeys.push_back(it.key());
  }
  CHECK(fkeys == std::vector<std::string>{"rule", "severity", "path", "cell", "detail",
                                          "recommendation"});
  CHECK(doc["findings"][0]["cell"] == 1);
  CHECK(doc["findings"][1]["cell"].is_null());
  std::vector<std::string> skeys;
  for (auto it = doc["summary"].begin(); it != doc["summary"].end(); ++it) skeys.push_back(it.key());
  CHECK(skeys == std::vector<std::string>{"error", "warning", "info"});
}

TEST_CASE("json: empty report") {
  Report r;
  auto doc = nlohmann::json::parse(RenderJson(r));
  CHECK(doc["findings"].is_array());
  CHECK(doc["findings"].empty());
  CHECK(doc["summary"]["error"] == 0);
  CHECK(doc["summary"]["warning"] == 0);
  CHECK(doc["summary"]["info"] == 0);
}

TEST_CASE("json: round trip and determinism") {
  Report r = SampleReport();
  r.findings[0].detail = "unicode \xc3\xa9 \"quoted\" \\ back\nslash\ttab";
  std::string text = RenderJson(r);
  CHECK(text == RenderJson(r));
  Report back = ParseJsonReport(text);
  CHECK(back.tool_version == r.tool_version);
  CHECK(back.target == r.target);
  CHECK(back.analyzed_notebook_count == r.analyzed_notebook_count);
  CHECK(back.summary == r.summary);
  REQUIRE(back.findings.size() == r.findings.size());
  for (size_t i = 0; i < r.findings.size(); ++i) {
    CHECK(back.findings[i].rule_id == r.findings[i].rule_id);
    CHECK(back.findings[i].severity == r.findings[i].severity);
    CHECK(back.findings[i].path == r.findings[i].path);
    CHECK(back.findings[i].cell_index == r.findings[i].cell_index);
    CHECK(back.findings[i].detail == r.findings[i].detail);
    CHECK(back.findings[i].recommendation == r.findings[i].recommendation);
  }
  CHECK(RenderJson(back) == text);
  CHECK_THROWS_AS(ParseJsonReport("{}"), Error);
  CHECK_THROWS_AS(ParseJsonReport("[1"), Error);
}

TEST_CASE("exit status matrix") {
  struct Row {
    std::vector<Severity> findings;
    int error, warning, info, never;
  };
  const Row rows[] = {
      {{}, 0, 0, 0, 0},
      {{Severity::kInfo}, 0, 0, 1, 0},
      {{Severity::kInfo, Severity::kWarning}, 0, 1, 1, 0},
      {{Severity::kError}, 1, 1, 1, 0},
  };
  for (const Row& row : rows) {
    Report r = WithSeverities(row.findings);
    CHECK(ExitStatus(r, FailLevel::kError) == row.error);
    CHECK(ExitStatus(r, FailLevel::kWarning) == row.warning);
    CHECK(ExitStatus(r, FailLevel::kInfo) == row.info);
    CHECK(ExitStatus(r, FailLevel::kNever) == row.never);
    // Lowering the level never turns a failure into a pass.
    CHECK(ExitStatus(r, FailLevel::kInfo) >= ExitStatus(r, FailLevel::kWarning));
    CHECK(ExitStatus(r, FailLevel::kWarning) >= ExitStatus(r, FailLevel::kError));
  }
}

TEST_CASE("renderers agree on finding count and rule ids") {
  Report r = SampleReport();
  std::string terminal = RenderTerminal(r, false);
  std::string md = RenderMarkdown(r);
  auto doc = nlohmann::json::parse(RenderJson(r));
  CHECK(doc["findings"].size() == r.findings.size());
  for (const auto& f : r.findings) {
    CHECK(terminal.find(f.rule_id) != std::string::npos);
    CHECK(md.find("| " + f.rule_id + " |") != std::string::npos);
  }
  CHECK(Count(md, "\n| notebook-") + Count(md, "\n| repo-") == 3);
}

TEST_CASE("summary counts sum to the number of findings") {
  Report r = SampleReport();
  CHECK(r.summary.total() == static_cast<int>(r.findings.size()));
}

}  // TEST_SUITE
