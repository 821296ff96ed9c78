#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lineage_forge/ast.hpp"
#include "lineage_forge/diagnostics.hpp"
#include "lineage_forge/query_registry.hpp"
#include "lineage_forge/schema_catalog.hpp"

namespace lineage_forge {

struct OutputColumn {
  std::string name;
  std::set<ColumnRef> contributors;
  bool operator==(const OutputColumn&) const = default;
};

// Lineage of one query: table lineage plus output -> source column sets.
// Only base tables and registered views appear; CTE and derived-table
// indirection is always flattened away.
struct QueryLineage {
  std::string query_id;
  std::set<std::string> tables;
  std::vector<OutputColumn> outputs;
  std::set<ColumnRef> referenced;
  bool operator==(const QueryLineage&) const = default;
};

struct Deferred {
  std::string missing;
  bool operator==(const Deferred&) const = default;
};

enum class EdgeKind { Contributes, References, Both };

const char* to_string(EdgeKind kind);
std::optional<EdgeKind> edge_kind_from_string(std::string_view text);
EdgeKind merge_kinds(EdgeKind a, EdgeKind b);

struct SourceEdge {
  ColumnRef source;
  EdgeKind kind = EdgeKind::Contributes;
  bool operator==(const SourceEdge&) const = default;
};

// Kinds of each source feeding one output: contributors are `contributes`
// (or `both` when also referenced); the rest of `referenced` is `references`.
// Sorted by source.
std::vector<SourceEdge> classify(const OutputColumn& output, const std::set<ColumnRef>& referenced);

// -- column candidates (C_pos) ---------------------------------------------

struct CandidateColumn {
  std::string name;
  std::set<ColumnRef> sources;  // {relation.name} for tables, flattened for CTEs
};

struct CandidateBinding {
  std::string alias;     // FROM alias, or the CTE / derived-table name
  std::string relation;  // resolved relation id; empty for CTEs and derived tables
  bool complete = true;  // false for base tables known only by observation
  std::vector<CandidateColumn> columns;

  bool derived() const { return relation.empty(); }
  const CandidateColumn* find(std::string_view column) const;
};

enum class ResolveStatus { Resolved, Ambiguous, Unresolvable, UnknownQualifier };

struct ColumnResolution {
  ResolveStatus status = ResolveStatus::Unresolvable;
  std::set<ColumnRef> refs;
  std::vector<ColumnRef> observed;  // optimistic matches against incomplete base tables
};

ColumnResolution resolve_column(const std::optional<std::string>& qualifier, const std::string& column,
                                std::span<const CandidateBinding> candidates);

// -- traversal trace ---------------------------------------------------------

enum class Rule { ScanTable, ScanCte, WithBinding, DerivedTable, Subquery, Join, Filter, GroupBy, Sort, Limit, SetOp, Project };

const char* to_string(Rule rule);

struct TraceEvent {
  Rule rule;
  std::string subject;             // relation, binding name or output list
  std::vector<ColumnRef> columns;  // columns added to C_ref (or P's sources)
  bool operator==(const TraceEvent&) const = default;
};

using Trace = std::vector<TraceEvent>;

// -- extraction --------------------------------------------------------------

struct ExtractOptions {
  Trace* trace = nullptr;
  // Registered ids that will never resolve (cycle members); scanned like
  // unknown base tables instead of deferring.
  const std::set<std::string>* unavailable = nullptr;
};

struct ExtractionResult {
  std::variant<QueryLineage, Deferred> outcome;
  Diagnostics diagnostics;
  std::vector<ColumnRef> observations;  // base columns to commit to the catalog

  bool deferred() const { return std::holds_alternative<Deferred>(outcome); }
  const QueryLineage& lineage() const { return std::get<QueryLineage>(outcome); }
  const Deferred& deferral() const { return std::get<Deferred>(outcome); }
};

// Post-order traversal of one query body. Returns Deferred when it scans a
// registered view the catalog has not resolved yet. Pure: the catalog is only
// read; observed base columns are returned for the caller to commit.
ExtractionResult extract(std::string_view query_id, const QueryNode& body, const SchemaCatalog& catalog,
                         const QueryDictionary& qd, const ExtractOptions& options = {});

ExtractionResult extract(const NormalizedStatement& stmt, const SchemaCatalog& catalog, const QueryDictionary& qd,
                         const ExtractOptions& options = {});

}  // namespace lineage_forge
