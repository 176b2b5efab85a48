/* C interface implemented by rule plugins.
 *
 * A plugin is a shared library exporting
 *
 *   const nblint_plugin* nblint_plugin_entry(void);
 *
 * The returned manifest and every string it references must stay valid for
 * the life of the process. Check functions receive read-only views that are
 * valid only during the call, report violations through the sink, and return
 * 0 on success. Any other return value is treated as a rule failure and the
 * violations reported during that call are discarded. */
#ifndef NBLINT_PLUGIN_API_H_
#define NBLINT_PLUGIN_API_H_

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#define NBLINT_PLUGIN_ABI_VERSION 1
#define NBLINT_PLUGIN_ENTRY_SYMBOL "nblint_plugin_entry"

enum { NBLINT_SCOPE_NOTEBOOK = 0, NBLINT_SCOPE_PROJECT = 1 };
enum { NBLINT_SEVERITY_INFO = 0, NBLINT_SEVERITY_WARNING = 1, NBLINT_SEVERITY_ERROR = 2 };
enum { NBLINT_CELL_CODE = 0, NBLINT_CELL_MARKDOWN = 1, NBLINT_CELL_RAW = 2 };

typedef struct nblint_cell {
  int index;
  int kind;
  const char* source;
  int has_execution_count;
  int execution_count;
} nblint_cell;

typedef struct nblint_notebook_view {
  const char* path; /* relative to the project root */
  const char* language;
  int is_python;
  const nblint_cell* cells;
  size_t cell_count;
  int max_cells_per_notebook;
  int max_lines_per_code_cell;
} nblint_notebook_view;

typedef struct nblint_project_view {
  const char* root;
  int is_version_controlled;
  const char* const* notebook_paths;
  size_t notebook_count;
  const char* const* dependency_files;
  size_t dependency_file_count;
  const char* const* test_paths;
  size_t test_path_count;
  const char* const* dvc_artifacts;
  size_t dvc_artifact_count;
} nblint_project_view;

/* cell_index is -1 for findings not tied to a cell. */
typedef void (*nblint_emit_fn)(void* context, int cell_index, const char* detail);

typedef struct nblint_sink {
  void* context;
  nblint_emit_fn emit;
} nblint_sink;

typedef int (*nblint_notebook_check_fn)(const nblint_notebook_view* view, const nblint_sink* sink);
typedef int (*nblint_project_check_fn)(const nblint_project_view* view, const nblint_sink* sink);

typedef struct nblint_plugin_rule {
  const char* id;
  int scope;
  int severity;
  const char* title;
  const char* recommendation;
  int language_specific;
  /* Set the one matching scope. */
  nblint_notebook_check_fn check_notebook;
  nblint_project_check_fn check_project;
} nblint_plugin_rule;

typedef struct nblint_plugin {
  int abi_version;
  const char* name;
  const nblint_plugin_rule* rules;
  size_t rule_count;
} nblint_plugin;

typedef const nblint_plugin* (*nblint_plugin_entry_fn)(void);

#ifdef __cplusplus
}
#endif

#endif /* NBLINT_PLUGIN_API_H_ */
