/* Claims the id of a built-in rule. */
#include "nblint/plugin_api.h"

static int check(const nblint_notebook_view* view, const nblint_sink* sink) {
  (void)view;
  (void)sink;
  return 0;
}

static const nblint_plugin_rule kRules[] = {
    {"custom-extra", NBLINT_SCOPE_NOTEBOOK, NBLINT_SEVERITY_INFO, "Extra", "Nothing to do.", 0,
     check, NULL},
    {"notebook-untitled", NBLINT_SCOPE_NOTEBOOK, NBLINT_SEVERITY_INFO, "Shadow",
     "Nothing to do.", 0, check, NULL},
};

static const nblint_plugin kPlugin = {NBLINT_PLUGIN_ABI_VERSION, "duplicate", kRules,
                                      sizeof kRules / sizeof kRules[0]};

const nblint_plugin* nblint_plugin_entry(void) { return &kPlugin; }
