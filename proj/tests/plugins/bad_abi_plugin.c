/* Declares an ABI version the host does not speak. */
#include "nblint/plugin_api.h"

static int check(const nblint_notebook_view* view, const nblint_sink* sink) {
  (void)view;
  (void)sink;
  return 0;
}

static const nblint_plugin_rule kRules[] = {
    {"custom-future", NBLINT_SCOPE_NOTEBOOK, NBLINT_SEVERITY_INFO, "Future", "Nothing to do.", 0,
     check, NULL},
};

static const nblint_plugin kPlugin = {NBLINT_PLUGIN_ABI_VERSION + 1, "bad-abi", kRules, 1};

const nblint_plugin* nblint_plugin_entry(void) { return &kPlugin; }
