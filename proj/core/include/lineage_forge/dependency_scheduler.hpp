#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "lineage_forge/diagnostics.hpp"
#include "lineage_forge/lineage_engine.hpp"
#include "lineage_forge/query_registry.hpp"
#include "lineage_forge/schema_catalog.hpp"

namespace lineage_forge {

struct ScheduleResult {
  std::map<std::string, QueryLineage> lineages;
  std::vector<std::string> order;  // finalization order
  std::size_t deferrals = 0;
  std::vector<std::vector<std::string>> cycles;
  std::set<std::string> excluded;  // cycle members, no lineage
  Diagnostics diagnostics;
};

// Extracts every registered query, in source order, deferring a query on a
// stack whenever it scans a view that is not resolved yet (LIFO resume).
// Resolved views are registered into `catalog` as they finish.
ScheduleResult run_all(const QueryDictionary& qd, SchemaCatalog& catalog);

inline const std::vector<std::string>& resolution_order(const ScheduleResult& result) { return result.order; }

}  // namespace lineage_forge
