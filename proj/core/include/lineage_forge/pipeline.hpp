#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lineage_forge/dependency_scheduler.hpp"
#include "lineage_forge/graph_model.hpp"
#include "lineage_forge/query_registry.hpp"
#include "lineage_forge/schema_catalog.hpp"

namespace lineage_forge {

struct SourceText {
  std::string text;
  std::optional<std::string> label;  // file stem for file inputs
};

struct PipelineOptions {
  RegistryOptions registry;
};

struct PipelineResult {
  QueryDictionary qd;
  SchemaCatalog catalog;
  ScheduleResult schedule;
  LineageGraph graph;
  std::size_t parse_failures = 0;  // ParseError, UnsupportedStatement and script errors
};

// split -> parse -> register -> schedule/extract -> merge. Never throws on
// malformed SQL; problems surface as diagnostics on the graph.
PipelineResult run_pipeline(const std::vector<SourceText>& sources, SchemaCatalog catalog = {},
                            const PipelineOptions& options = {});

inline PipelineResult run_pipeline(const std::string& script) { return run_pipeline({SourceText{script, {}}}); }

}  // namespace lineage_forge
