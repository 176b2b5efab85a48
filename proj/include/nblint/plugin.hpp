#pragma once

#include <string>
#include <vector>

#include "nblint/engine.hpp"

namespace nblint {

// Loads each plugin and adds its rules to the registry. A locator is either a
// path to a shared library (it contains a `/` or ends in `.so`) or a bare
// name `x`, which resolves to `libnblint-x.so` through the dynamic loader's
// search path.
//
// Throws kPluginLoad for an unloadable or malformed plugin and
// kDuplicateRuleId on an id collision. A plugin is added entirely or not at
// all.
void RegisterPlugins(RuleRegistry& registry, const std::vector<std::string>& locators);

}  // namespace nblint
