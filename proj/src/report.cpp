#include "nblint/report.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "nblint/error.hpp"

namespace nblint {
namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::string_view kProjectPath = ".";

std::string Plural(int n, std::string_view one, std::string_view many) {
  return std::to_string(n) + " " + std::string(n == 1 ? one : many);
}

std::string SummaryText(const SeveritySummary& s) {
  return Plural(s.total(), "finding", "findings") + " (" + Plural(s.error, "error", "errors") +
         ", " + Plural(s.warning, "warning", "warnings") + ", " + std::to_string(s.info) +
         " info)";
}

std::string TitleOf(const Report& report, const std::string& id) {
  for (const auto& entry : report.rule_catalog) {
    if (entry.id == id) return entry.title;
  }
  return id;
}

std::vector<std::string> SplitLines(const std::string& text) {
  std::vector<std::string> lines;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    lines.push_back(text.substr(pos, end - pos));
    pos = end + 1;
  }
  return lines;
}

// Notebook sections in path order; findings for unreadable notebooks get a
// section too.
std::vector<std::string> NotebookSections(const Report& report) {
  std::set<std::string> paths(report.notebooks.begin(), report.notebooks.end());
  for (const auto& f : report.findings) {
    if (f.path != kProjectPath) paths.insert(f.path);
  }
  return {paths.begin(), paths.end()};
}

std::vector<const Finding*> FindingsFor(const Report& report, std::string_view path) {
  std::vector<const Finding*> out;
  for (const auto& f : report.findings) {
    if (f.path == path) out.push_back(&f);
  }
  return out;
}

class Style {
 public:
  explicit Style(bool enabled) : enabled_(enabled) {}

  std::string Bold(const std::string& s) const { return Wrap("1", s); }
  std::string Dim(const std::string& s) const { return Wrap("2", s); }
  std::string Severity(nblint::Severity severity) const {
    std::string label(ToString(severity));
    label.resize(7, ' ');
    switch (severity) {
      case nblint::Severity::kError:
        return Wrap("1;31", label);
      case nblint::Severity::kWarning:
        return Wrap("33", label);
      case nblint::Severity::kInfo:
        return Wrap("36", label);
    }
    return label;
  }

 private:
  std::string Wrap(std::string_view code, const std::string& s) const {
    if (!enabled_) return s;
    return "\x1b[" + std::string(code) + "m" + s + "\x1b[0m";
  }

  bool enabled_;
};

void TerminalFinding(const Report& report, const Finding& f, const Style& style,
                     std::string& out) {
  out += "  " + style.Severity(f.severity) + "  " + style.Bold(f.rule_id) + "  " +
         TitleOf(report, f.rule_id) + "\n";
  std::string where = f.cell_index ? "cell " + std::to_string(*f.cell_index) + ": " : "";
  out += "    " + where + f.detail + "\n";
  out += "    -> " + f.recommendation + "\n";
  if (f.preview) {
    for (const auto& line : SplitLines(*f.preview)) out += "    " + style.Dim("| " + line) + "\n";
    if (f.preview_truncated) out += "    " + style.Dim("| ... (preview truncated)") + "\n";
  }
}

// Backslash-escapes Markdown punctuation so the text renders literally and
// cannot break a table row. Newlines become <br>.
std::string EscapeInline(std::string_view text) {
  static const std::string_view kSpecial = "\\`*_[]<>#|~&!{}()";
  std::string out;
  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '\r') {
      if (i + 1 < text.size() && text[i + 1] == '\n') continue;
      out += "<br>";
    } else if (c == '\n') {
      out += "<br>";
    } else if (c == '\t') {
      out += ' ';
    } else {
      if (kSpecial.find(c) != std::string_view::npos) out += '\\';
      out += c;
    }
  }
  return out;
}

std::string Fence(const std::string& body) {
  size_t longest = 0, run = 0;
  for (char c : body) {
    run = c == '`' ? run + 1 : 0;
    longest = std::max(longest, run);
  }
  return std::string(std::max<size_t>(3, longest + 1), '`');
}

void MarkdownFindings(const std::vector<const Finding*>& findings, std::string& out) {
  if (findings.empty()) {
    out += "No findings.\n\n";
    return;
  }
  out += "| Rule | Severity | Cell | Detail | Recommendation |\n";
  out += "| --- | --- | --- | --- | --- |\n";
  for (const Finding* f : findings) {
    out += "| " + EscapeInline(f->rule_id) + " | " + std::string(ToString(f->severity)) + " | " +
           (f->cell_index ? std::to_string(*f->cell_index) : std::string("-")) + " | " +
           EscapeInline(f->detail) + " | " + EscapeInline(f->recommendation) + " |\n";
  }
  out += "\n";
  for (const Finding* f : findings) {
    if (!f->preview) continue;
    out += "Cell " + std::to_string(*f->cell_index) + " (" + EscapeInline(f->rule_id) + "):\n\n";
    std::string fence = Fence(*f->preview);
    out += fence + "\n" + *f->preview + "\n";
    if (f->preview_truncated) out += "...\n";
    out += fence + "\n\n";
  }
}

Finding FindingFromJson(const ordered_json& j) {
  Finding f;
  f.rule_id = j.at("rule").get<std::string>();
  auto severity = ParseSeverity(j.at("severity").get<std::string>());
  if (!severity) throw std::invalid_argument("unknown severity");
  f.severity = *severity;
  f.path = j.at("path").get<std::string>();
  if (!j.at("cell").is_null()) f.cell_index = j.at("cell").get<int>();
  f.detail = j.at("detail").get<std::string>();
  f.recommendation = j.at("recommendation").get<std::string>();
  return f;
}

}  // namespace

SeveritySummary Summarize(const std::vector<Finding>& findings) {
  SeveritySummary s;
  for (const auto& f : findings) {
    switch (f.severity) {
      case Severity::kError:
        ++s.error;
        break;
      case Severity::kWarning:
        ++s.warning;
        break;
      case Severity::kInfo:
        ++s.info;
        break;
    }
  }
  return s;
}

Report MakeReport(std::string target, const Project& project, std::vector<Finding> findings,
                  const std::vector<const Rule*>& rules) {
  Report r;
  r.target = std::move(target);
  r.analyzed_notebook_count = static_cast<int>(project.notebooks.size());
  for (const auto& nb : project.notebooks) r.notebooks.push_back(nb.relative_path);
  r.project_scope = project.origin != Origin::kStandaloneNotebook && project.facts.applicable;
  std::map<std::string, std::string> catalog;
  for (const Rule* rule : rules) catalog[rule->descriptor.id] = rule->descriptor.title;
  for (const auto& d : EngineDescriptors()) {
    bool used = std::any_of(findings.begin(), findings.end(),
                            [&](const Finding& f) { return f.rule_id == d.id; });
    if (used) catalog[d.id] = d.title;
  }
  for (auto& [id, title] : catalog) r.rule_catalog.push_back({id, title});
  r.summary = Summarize(findings);
  r.findings = std::move(findings);
  return r;
}

std::string RenderTerminal(const Report& report, bool use_color) {
  Style style(use_color);
  std::string out;
  out += style.Bold("nblint " + report.tool_version) + "  " + report.target + "\n";
  if (report.generated_at) out += "generated " + *report.generated_at + "\n";
  for (const auto& path : NotebookSections(report)) {
    out += "\n" + style.Bold(path) + "\n";
    auto findings = FindingsFor(report, path);
    if (findings.empty()) out += "  no findings\n";
    for (const Finding* f : findings) TerminalFinding(report, *f, style, out);
  }
  auto project = FindingsFor(report, kProjectPath);
  if (report.project_scope || !project.empty()) {
    out += "\n" + style.Bold("project") + "\n";
    if (project.empty()) out += "  no findings\n";
    for (const Finding* f : project) TerminalFinding(report, *f, style, out);
  }
  out += "\n" + SummaryText(report.summary) + " in " +
         Plural(report.analyzed_notebook_count, "analyzed notebook", "analyzed notebooks") + "\n";
  return out;
}

std::string RenderMarkdown(const Report& report) {
  std::string out = "# Notebook lint report\n\n";
  out += "- Target: " + EscapeInline(report.target) + "\n";
  out += "- Tool version: " + EscapeInline(report.tool_version) + "\n";
  out += "- Notebooks analyzed: " + std::to_string(report.analyzed_notebook_count) + "\n";
  if (report.generated_at) out += "- Generated: " + EscapeInline(*report.generated_at) + "\n";
  out += "\n";
  for (const auto& path : NotebookSections(report)) {
    out += "## " + EscapeInline(path) + "\n\n";
    MarkdownFindings(FindingsFor(report, path), out);
  }
  auto project = FindingsFor(report, kProjectPath);
  if (report.project_scope || !project.empty()) {
    out += "## Project\n\n";
    MarkdownFindings(project, out);
  }
  out += "## Summary\n\n";
  if (report.findings.empty()) {
    out += "No violations detected.\n";
  } else {
    const auto& s = report.summary;
    out += "| Severity | Count |\n| --- | --- |\n";
    out += "| error | " + std::to_string(s.error) + " |\n";
    out += "| warning | " + std::to_string(s.warning) + " |\n";
    out += "| info | " + std::to_string(s.info) + " |\n";
    out += "\n" + Plural(s.total(), "finding", "findings") + " in total.\n";
  }
  return out;
}

std::string RenderJson(const Report& report) {
  ordered_json doc;
  doc["version"] = report.tool_version;
  doc["target"] = report.target;
  doc["notebooks_analyzed"] = report.analyzed_notebook_count;
  ordered_json findings = ordered_json::array();
  for (const auto& f : report.findings) {
    ordered_json item;
    item["rule"] = f.rule_id;
    item["severity"] = std::string(ToString(f.severity));
    item["path"] = f.path;
    item["cell"] = f.cell_index ? ordered_json(*f.cell_index) : ordered_json(nullptr);
    item["detail"] = f.detail;
    item["recommendation"] = f.recommendation;
    findings.push_back(std::move(item));
  }
  doc["findings"] = std::move(findings);
  doc["summary"] = ordered_json{{"error", report.summary.error},
                                {"warning", report.summary.warning},
                                {"info", report.summary.info}};
  return doc.dump(2, ' ', false, nlohmann::json::error_handler_t::replace) + "\n";
}

Report ParseJsonReport(std::string_view json) {
  try {
    ordered_json doc = ordered_json::parse(json);
    Report r;
    r.tool_version = doc.at("version").get<std::string>();
    r.target = doc.at("target").get<std::string>();
    r.analyzed_notebook_count = doc.at("notebooks_analyzed").get<int>();
    for (const auto& item : doc.at("findings")) r.findings.push_back(FindingFromJson(item));
    const auto& s = doc.at("summary");
    r.summary = {s.at("error").get<int>(), s.at("warning").get<int>(), s.at("info").get<int>()};
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedJson, std::string("invalid report JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw Error(ErrorCode::kMalformedJson, std::string("invalid report JSON: ") + e.what());
  }
}

int ExitStatus(const Report& report, FailLevel fail_level) {
  if (fail_level == FailLevel::kNever) return 0;
  Severity threshold = fail_level == FailLevel::kError     ? Severity::kError
                       : fail_level == FailLevel::kWarning ? Severity::kWarning
                                                           : Severity::kInfo;
  for (const auto& f : report.findings) {
    if (f.severity >= threshold) return 1;
  }
  return 0;
}

}  // namespace nblint
