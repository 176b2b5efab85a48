#include "nblint/plugin.hpp"

#include <dlfcn.h>

#include <memory>
#include <set>

#include "nblint/error.hpp"
#include "nblint/plugin_api.h"

namespace nblint {
namespace {

struct Collector {
  std::vector<Violation> violations;
};

extern "C" void CollectViolation(void* context, int cell_index, const char* detail) {
  auto* collector = static_cast<Collector*>(context);
  Violation v;
  if (cell_index >= 0) v.cell_index = cell_index;
  v.detail = detail ? detail : "";
  collector->violations.push_back(std::move(v));
}

std::vector<const char*> CStrings(const std::vector<std::string>& items) {
  std::vector<const char*> out;
  out.reserve(items.size());
  for (const auto& s : items) out.push_back(s.c_str());
  return out;
}

void CheckStatus(int status, const std::string& id) {
  if (status != 0) {
    throw std::runtime_error("plugin rule '" + id + "' returned status " + std::to_string(status));
  }
}

Rule Adapt(const nblint_plugin_rule& raw, std::shared_ptr<void> library) {
  Rule rule;
  rule.descriptor.id = raw.id;
  rule.descriptor.scope = raw.scope == NBLINT_SCOPE_PROJECT ? Scope::kProject : Scope::kNotebook;
  rule.descriptor.severity = static_cast<Severity>(raw.severity);
  rule.descriptor.title = raw.title ? raw.title : raw.id;
  rule.descriptor.recommendation = raw.recommendation ? raw.recommendation : "";
  rule.descriptor.language_specific = raw.language_specific != 0;
  std::string id = rule.descriptor.id;

  if (rule.descriptor.scope == Scope::kNotebook) {
    nblint_notebook_check_fn fn = raw.check_notebook;
    rule.notebook_check = [fn, id, library](const NotebookView& view) {
      std::vector<nblint_cell> cells;
      cells.reserve(view.notebook.cells.size());
      for (const Cell& c : view.notebook.cells) {
        nblint_cell cell{};
        cell.index = c.index;
        cell.kind = c.kind == CellKind::kCode       ? NBLINT_CELL_CODE
                    : c.kind == CellKind::kMarkdown ? NBLINT_CELL_MARKDOWN
                                                    : NBLINT_CELL_RAW;
        cell.source = c.source.c_str();
        cell.has_execution_count = c.execution_count.has_value();
        cell.execution_count = c.execution_count.value_or(0);
        cells.push_back(cell);
      }
      std::string path(view.path);
      nblint_notebook_view nv{};
      nv.path = path.c_str();
      nv.language = view.notebook.language.c_str();
      nv.is_python = view.notebook.IsPython();
      nv.cells = cells.data();
      nv.cell_count = cells.size();
      nv.max_cells_per_notebook = view.thresholds.max_cells_per_notebook;
      nv.max_lines_per_code_cell = view.thresholds.max_lines_per_code_cell;
      Collector collector;
      nblint_sink sink{&collector, &CollectViolation};
      CheckStatus(fn(&nv, &sink), id);
      return collector.violations;
    };
  } else {
    nblint_project_check_fn fn = raw.check_project;
    rule.project_check = [fn, id, library](const ProjectView& view) {
      std::vector<std::string> notebook_paths;
      for (const auto& nb : view.project.notebooks) notebook_paths.push_back(nb.relative_path);
      auto notebooks = CStrings(notebook_paths);
      auto deps = CStrings(view.facts.dependency_files);
      auto tests = CStrings(view.facts.test_paths);
      auto dvc = CStrings(view.facts.dvc_artifacts);
      std::string root = view.project.root.string();
      nblint_project_view pv{};
      pv.root = root.c_str();
      pv.is_version_controlled =
          view.facts.is_version_controlled || view.facts.version_control_satisfied_by_origin;
      pv.notebook_paths = notebooks.data();
      pv.notebook_count = notebooks.size();
      pv.dependency_files = deps.data();
      pv.dependency_file_count = deps.size();
      pv.test_paths = tests.data();
      pv.test_path_count = tests.size();
      pv.dvc_artifacts = dvc.data();
      pv.dvc_artifact_count = dvc.size();
      Collector collector;
      nblint_sink sink{&collector, &CollectViolation};
      CheckStatus(fn(&pv, &sink), id);
      for (auto& v : collector.violations) v.cell_index.reset();
      return collector.violations;
    };
  }
  return rule;
}

std::string ResolveLocator(const std::string& locator) {
  bool is_path = locator.find('/') != std::string::npos ||
                 (locator.size() > 3 && locator.compare(locator.size() - 3, 3, ".so") == 0);
  return is_path ? locator : "libnblint-" + locator + ".so";
}

std::vector<Rule> LoadPlugin(const std::string& locator) {
  std::string file = ResolveLocator(locator);
  dlerror();
  void* handle = dlopen(file.c_str(), RTLD_NOW | RTLD_LOCAL);
  if (!handle) {
    const char* why = dlerror();
    throw Error(ErrorCode::kPluginLoad,
                "cannot load plugin '" + locator + "': " + (why ? why : "unknown error"));
  }
  std::shared_ptr<void> library(handle, [](void* h) { dlclose(h); });

  void* symbol = dlsym(handle, NBLINT_PLUGIN_ENTRY_SYMBOL);
  if (!symbol) {
    throw Error(ErrorCode::kPluginLoad,
                "plugin '" + locator + "' does not export " NBLINT_PLUGIN_ENTRY_SYMBOL);
  }
  auto entry = reinterpret_cast<nblint_plugin_entry_fn>(symbol);
  const nblint_plugin* manifest = entry();
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::kPluginLoad, "plugin '" + locator + "': " + why);
  };
  if (!manifest) fail("entry point returned no manifest");
  if (manifest->abi_version != NBLINT_PLUGIN_ABI_VERSION) {
    fail("unsupported ABI version " + std::to_string(manifest->abi_version));
  }
  if (manifest->rule_count == 0 || !manifest->rules) fail("manifest declares no rules");

  std::vector<Rule> rules;
  for (size_t i = 0; i < manifest->rule_count; ++i) {
    const nblint_plugin_rule& raw = manifest->rules[i];
    if (!raw.id) fail("rule " + std::to_string(i) + " has no id");
    if (raw.scope != NBLINT_SCOPE_NOTEBOOK && raw.scope != NBLINT_SCOPE_PROJECT) {
      fail("rule '" + std::string(raw.id) + "' has an invalid scope");
    }
    if (raw.severity < NBLINT_SEVERITY_INFO || raw.severity > NBLINT_SEVERITY_ERROR) {
      fail("rule '" + std::string(raw.id) + "' has an invalid severity");
    }
    if (raw.scope == NBLINT_SCOPE_NOTEBOOK ? !raw.check_notebook : !raw.check_project) {
      fail("rule '" + std::string(raw.id) + "' has no check for its scope");
    }
    if (!raw.recommendation || !*raw.recommendation) {
      fail("rule '" + std::string(raw.id) + "' has no recommendation");
    }
    if (!IsKebabCase(raw.id)) fail("rule id '" + std::string(raw.id) + "' is not kebab-case");
    rules.push_back(Adapt(raw, library));
  }
  return rules;
}

}  // namespace

void RegisterPlugins(RuleRegistry& registry, const std::vector<std::string>& locators) {
  for (const std::string& locator : locators) {
    std::vector<Rule> rules = LoadPlugin(locator);
    std::set<std::string> seen;
    for (const Rule& rule : rules) {
      const std::string& id = rule.descriptor.id;
      bool reserved = false;
      for (const auto& d : EngineDescriptors()) reserved = reserved || d.id == id;
      if (reserved || registry.Contains(id) || !seen.insert(id).second) {
        throw Error(ErrorCode::kDuplicateRuleId,
                    "plugin '" + locator + "' redefines rule id '" + id + "'");
      }
    }
    for (Rule& rule : rules) registry.Add(std::move(rule));
  }
}

}  // namespace nblint
