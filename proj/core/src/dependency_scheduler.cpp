#include "lineage_forge/dependency_scheduler.hpp"

#include <algorithm>

namespace lineage_forge {

ScheduleResult run_all(const QueryDictionary& qd, SchemaCatalog& catalog) {
  ScheduleResult result;
  std::set<std::string> done;

  for (const auto& root : qd.entries()) {
    if (done.count(root.id) || result.excluded.count(root.id)) continue;

    std::vector<std::string> stack;
    std::string current = root.id;
    while (true) {
      const QueryEntry* entry = qd.find(current);
      ExtractOptions options;
      options.unavailable = &result.excluded;
      ExtractionResult r = extract(current, entry->body, catalog, qd, options);

      if (r.deferred()) {
        const std::string& missing = r.deferral().missing;
        auto pos = std::find(stack.begin(), stack.end(), missing);
        if (pos != stack.end() || missing == current) {
          std::vector<std::string> cycle(pos, stack.end());
          cycle.push_back(current);
          std::string text;
          for (const auto& id : cycle) text += (text.empty() ? "" : " -> ") + id;
          result.diagnostics.error(codes::kCyclicDependency, "cyclic view definitions: " + text + " -> " + missing,
                                   missing);
          result.excluded.insert(cycle.begin(), cycle.end());
          result.cycles.push_back(std::move(cycle));
          stack.erase(pos, stack.end());
          if (stack.empty()) break;
          current = stack.back();
          stack.pop_back();
          continue;
        }
        // defer the current traversal; resolve the missing view first
        stack.push_back(current);
        ++result.deferrals;
        current = missing;
        continue;
      }

      for (const auto& ref : r.observations) catalog.observe_reference(ref.relation, ref.column);
      const QueryLineage& lineage = r.lineage();
      std::vector<std::string> columns;
      for (const auto& o : lineage.outputs) columns.push_back(o.name);
      catalog.resolve_view(current, std::move(columns));
      result.diagnostics.append(r.diagnostics);
      result.lineages.emplace(current, lineage);
      result.order.push_back(current);
      done.insert(current);

      if (stack.empty()) break;
      current = stack.back();
      stack.pop_back();
    }
  }
  return result;
}

}  // namespace lineage_forge
