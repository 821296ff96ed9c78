#pragma once

#include <compare>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lineage_forge/diagnostics.hpp"

namespace lineage_forge {

struct ColumnRef {
  std::string relation;
  std::string column;

  auto operator<=>(const ColumnRef&) const = default;
  bool operator==(const ColumnRef&) const = default;

  std::string str() const { return relation + "." + column; }
  // Splits "rel.col" at the last dot. Throws std::invalid_argument.
  static ColumnRef parse(std::string_view text);
};

enum class EntryKind { BaseObserved, ViewResolved, ExternallyDeclared };

struct CatalogEntry {
  std::string relation;
  EntryKind kind = EntryKind::BaseObserved;
  std::vector<std::string> columns;  // observation or projection order
  bool complete() const { return kind != EntryKind::BaseObserved; }
  bool has_column(std::string_view column) const;
};

struct RelationColumns {
  std::vector<std::string> columns;
  bool complete = false;
};

struct ScopeBinding {
  std::string alias;  // empty when unaliased
  std::string relation;
};

struct UnresolvedStar {
  std::string relation;
  bool operator==(const UnresolvedStar&) const = default;
};

class UnknownQualifier : public std::runtime_error {
 public:
  explicit UnknownQualifier(const std::string& qualifier)
      : std::runtime_error("unknown star qualifier '" + qualifier + "'"), qualifier_(qualifier) {}
  const std::string& qualifier() const { return qualifier_; }

 private:
  std::string qualifier_;
};

using StarExpansion = std::variant<std::vector<ColumnRef>, UnresolvedStar>;

// Known columns per relation. Base tables accumulate columns from observed
// references; views are filled from their extracted outputs.
class SchemaCatalog {
 public:
  // No-op on complete (view or declared) entries. Idempotent.
  void observe_reference(const std::string& relation, const std::string& column);
  void declare(const std::string& relation, std::vector<std::string> columns);
  void resolve_view(const std::string& relation, std::vector<std::string> columns);

  std::optional<RelationColumns> columns_of(std::string_view relation) const;
  const CatalogEntry* entry(std::string_view relation) const;
  bool is_resolved_view(std::string_view relation) const;

  // Expands `*` (no qualifier) or `q.*` over the FROM bindings in scope.
  // Throws UnknownQualifier.
  StarExpansion expand_star(const std::optional<std::string>& qualifier, std::span<const ScopeBinding> scope) const;

  const std::map<std::string, CatalogEntry, std::less<>>& entries() const { return entries_; }

 private:
  std::map<std::string, CatalogEntry, std::less<>> entries_;
};

// True when `qualifier` names this binding: its alias, or when unaliased its
// relation name or the relation's last dotted segment.
bool binding_matches(std::string_view qualifier, std::string_view alias, std::string_view relation);

// Parses `table(col1, col2, ...)` lines; blank lines and `--`/`#` comments are
// skipped. Malformed lines become diagnostics.
void load_schema_text(std::string_view text, SchemaCatalog& catalog, Diagnostics& diagnostics);

}  // namespace lineage_forge
