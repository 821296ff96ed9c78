#include "lineage_forge/schema_catalog.hpp"

#include <algorithm>
#include <cctype>

#include "lineage_forge/sql_frontend.hpp"

namespace lineage_forge {

ColumnRef ColumnRef::parse(std::string_view text) {
  const auto dot = text.rfind('.');
  if (dot == std::string_view::npos || dot == 0 || dot + 1 == text.size()) {
    throw std::invalid_argument("expected <relation>.<column>, got '" + std::string(text) + "'");
  }
  return {std::string(text.substr(0, dot)), std::string(text.substr(dot + 1))};
}

bool CatalogEntry::has_column(std::string_view column) const {
  return std::find(columns.begin(), columns.end(), column) != columns.end();
}

void SchemaCatalog::observe_reference(const std::string& relation, const std::string& column) {
  auto [it, inserted] = entries_.try_emplace(relation);
  CatalogEntry& e = it->second;
  if (inserted) {
    e.relation = relation;
    e.kind = EntryKind::BaseObserved;
  }
  if (e.complete()) return;
  if (!e.has_column(column)) e.columns.push_back(column);
}

void SchemaCatalog::declare(const std::string& relation, std::vector<std::string> columns) {
  entries_[relation] = CatalogEntry{relation, EntryKind::ExternallyDeclared, std::move(columns)};
}

void SchemaCatalog::resolve_view(const std::string& relation, std::vector<std::string> columns) {
  entries_[relation] = CatalogEntry{relation, EntryKind::ViewResolved, std::move(columns)};
}

std::optional<RelationColumns> SchemaCatalog::columns_of(std::string_view relation) const {
  const CatalogEntry* e = entry(relation);
  if (!e) return std::nullopt;
  return RelationColumns{e->columns, e->complete()};
}

const CatalogEntry* SchemaCatalog::entry(std::string_view relation) const {
  auto it = entries_.find(relation);
  return it == entries_.end() ? nullptr : &it->second;
}

bool SchemaCatalog::is_resolved_view(std::string_view relation) const {
  const CatalogEntry* e = entry(relation);
  return e && e->kind == EntryKind::ViewResolved;
}

bool binding_matches(std::string_view qualifier, std::string_view alias, std::string_view relation) {
  if (!alias.empty()) return qualifier == alias;
  if (qualifier == relation) return true;
  const auto dot = relation.rfind('.');
  return dot != std::string_view::npos && relation.substr(dot + 1) == qualifier;
}

StarExpansion SchemaCatalog::expand_star(const std::optional<std::string>& qualifier,
                                         std::span<const ScopeBinding> scope) const {
  std::vector<const ScopeBinding*> targets;
  if (qualifier) {
    for (const auto& b : scope) {
      if (binding_matches(*qualifier, b.alias, b.relation)) {
        targets.push_back(&b);
        break;
      }
    }
    if (targets.empty()) throw UnknownQualifier(*qualifier);
  } else {
    for (const auto& b : scope) targets.push_back(&b);
  }

  std::vector<ColumnRef> out;
  for (const ScopeBinding* b : targets) {
    const CatalogEntry* e = entry(b->relation);
    if (!e || !e->complete()) return UnresolvedStar{b->relation};
    for (const auto& col : e->columns) out.push_back({b->relation, col});
  }
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

void load_schema_text(std::string_view text, SchemaCatalog& catalog, Diagnostics& diagnostics) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.starts_with("--") || line.starts_with("#")) continue;

    const auto open = line.find('(');
    const auto close = line.rfind(')');
    const std::string_view name = open == std::string_view::npos ? std::string_view{} : trim(line.substr(0, open));
    if (open == std::string_view::npos || close == std::string_view::npos || close < open || name.empty() ||
        !trim(line.substr(close + 1)).empty()) {
      diagnostics.warn(codes::kSchemaFile,
                       "line " + std::to_string(line_no) + ": expected `table(col1, col2, ...)`");
      continue;
    }
    std::vector<std::string> columns;
    std::string_view body = line.substr(open + 1, close - open - 1);
    while (true) {
      const auto comma = body.find(',');
      const std::string_view col = trim(body.substr(0, comma));
      if (!col.empty()) {
        std::string normalized = normalize_identifier(col);
        if (std::find(columns.begin(), columns.end(), normalized) == columns.end()) {
          columns.push_back(std::move(normalized));
        }
      }
      if (comma == std::string_view::npos) break;
      body.remove_prefix(comma + 1);
    }
    catalog.declare(normalize_identifier(name), std::move(columns));
  }
}

}  // namespace lineage_forge
