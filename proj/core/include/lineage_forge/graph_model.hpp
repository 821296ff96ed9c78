#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lineage_forge/dependency_scheduler.hpp"
#include "lineage_forge/diagnostics.hpp"
#include "lineage_forge/lineage_engine.hpp"
#include "lineage_forge/query_registry.hpp"
#include "lineage_forge/schema_catalog.hpp"

namespace lineage_forge {

enum class NodeKind { Base, View, Query };

const char* to_string(NodeKind kind);

struct GraphNode {
  NodeKind kind = NodeKind::Base;
  std::vector<std::string> columns;
  bool operator==(const GraphNode&) const = default;
};

struct Edge {
  ColumnRef src;
  ColumnRef dst;
  EdgeKind kind = EdgeKind::Contributes;
  bool operator==(const Edge&) const = default;
};

class UnknownColumn : public std::out_of_range {
 public:
  explicit UnknownColumn(const std::string& column) : std::out_of_range("unknown column '" + column + "'") {}
};

class UnknownRelation : public std::out_of_range {
 public:
  explicit UnknownRelation(const std::string& relation) : std::out_of_range("unknown relation '" + relation + "'") {}
};

enum class Direction { Upstream, Downstream };

// Merged cross-query lineage graph: table nodes with column slots and at
// most one typed edge per (src, dst) column pair.
class LineageGraph {
 public:
  // Adds the node, or appends missing columns to an existing one.
  void add_node(const std::string& relation, NodeKind kind, const std::vector<std::string>& columns);
  // Merges with an existing edge's kind; creates missing endpoint slots.
  void add_edge(const ColumnRef& src, const ColumnRef& dst, EdgeKind kind);

  const std::map<std::string, GraphNode>& nodes() const { return nodes_; }
  const std::map<std::pair<ColumnRef, ColumnRef>, EdgeKind>& edge_map() const { return edges_; }
  std::vector<Edge> edges() const;
  std::size_t edge_count() const { return edges_.size(); }

  Diagnostics& diagnostics() { return diagnostics_; }
  const Diagnostics& diagnostics() const { return diagnostics_; }

  bool has_relation(std::string_view relation) const { return nodes_.count(std::string(relation)) > 0; }
  bool has_column(const ColumnRef& column) const;
  std::vector<ColumnRef> all_columns() const;

  const std::vector<ColumnRef>& successors(const ColumnRef& column) const;
  const std::vector<ColumnRef>& predecessors(const ColumnRef& column) const;

  bool operator==(const LineageGraph& other) const {
    return nodes_ == other.nodes_ && edges_ == other.edges_ && diagnostics_ == other.diagnostics_;
  }

 private:
  void ensure_slot(const ColumnRef& column);

  std::map<std::string, GraphNode> nodes_;
  std::map<std::pair<ColumnRef, ColumnRef>, EdgeKind> edges_;
  std::map<ColumnRef, std::vector<ColumnRef>> out_;
  std::map<ColumnRef, std::vector<ColumnRef>> in_;
  Diagnostics diagnostics_;
};

// One node per base table (catalog columns) and per extracted query (its
// outputs); edges materialized through classify.
LineageGraph merge(const std::map<std::string, QueryLineage>& lineages, const QueryDictionary& qd,
                   const SchemaCatalog& catalog, const Diagnostics& diagnostics = {});

inline LineageGraph merge(const ScheduleResult& schedule, const QueryDictionary& qd, const SchemaCatalog& catalog) {
  return merge(schedule.lineages, qd, catalog, schedule.diagnostics);
}

// Transitive closure over edges of every kind, excluding the seed.
// Throws UnknownColumn.
std::set<ColumnRef> downstream_closure(const LineageGraph& graph, const ColumnRef& seed);
std::set<ColumnRef> upstream_closure(const LineageGraph& graph, const ColumnRef& seed);

// One hop over the table-level projection of edges. Throws UnknownRelation.
std::set<std::string> neighbors(const LineageGraph& graph, const std::string& relation, Direction direction);

// Canonical document: sorted keys, edges ordered by (src, dst), `\n` endings.
std::string to_json(const LineageGraph& graph);
// Throws std::invalid_argument on malformed documents.
LineageGraph from_json(std::string_view text);

}  // namespace lineage_forge
