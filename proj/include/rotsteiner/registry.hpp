#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rotsteiner/group.hpp"

namespace rotsteiner {

// Named fixture groups: every group of the orders the test corpus sweeps
// (6, 8, 12, 14, 15, 18, 20, 24, 27, 40) plus a stretch subset of order 64.
// Within one order, entries appear in small-group-id order where that id is
// recorded, otherwise in a fixed documented order.
struct RegistryEntry {
  std::string name;        // canonical lookup name, e.g. "SL(2,3)"
  std::string structure;   // display string, e.g. "C3 : C8"
  int order = 0;
  std::optional<int> small_group_id;  // catalogue id within its order
  std::vector<std::string> aliases;
  std::function<GroupSpec()> spec;
};

const std::vector<RegistryEntry>& registry_entries();

// Case- and space-insensitive name lookup over names and aliases.
const RegistryEntry* find_registry_entry(const std::string& name);

// All registry entries of one order, in registry order.
std::vector<const RegistryEntry*> groups_of_order(int order);

// Resolved group: the table plus a display string for reports.
struct ResolvedGroup {
  CayleyTable table;
  std::string name;       // input text, normalized
  std::string structure;  // display structure
};

// Resolves CLI text: fixture-file overrides (see below), then registry
// names, then the anonymous GroupSpec syntax. Throws std::invalid_argument
// on unknown names / bad syntax.
ResolvedGroup resolve_group(const std::string& text);

// Name of the environment variable pointing at a fixture override file.
// Each non-comment line is "<name> <group spec text>"; names defined there
// shadow built-in registry names in resolve_group.
inline constexpr const char* kFixturesEnvVar = "ROTSTEINER_FIXTURES";

}  // namespace rotsteiner
