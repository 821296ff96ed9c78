#include "lineage_forge/query_registry.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <random>

#include "lineage_forge/sql_frontend.hpp"

namespace lineage_forge {

const char* to_string(QueryOrigin origin) {
  switch (origin) {
    case QueryOrigin::CreateView: return "CreateView";
    case QueryOrigin::CreateTableAs: return "CreateTableAs";
    case QueryOrigin::FileNamed: return "FileNamed";
    case QueryOrigin::Generated: return "Generated";
  }
  return "?";
}

const QueryEntry* QueryDictionary::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &entries_[it->second];
}

std::optional<std::string> QueryDictionary::resolve_name(std::string_view name) const {
  if (find(name)) return std::string(name);
  if (name.find('.') != std::string_view::npos) return std::nullopt;
  std::optional<std::string> match;
  for (const auto& entry : entries_) {
    const auto dot = entry.id.rfind('.');
    if (dot != std::string::npos && std::string_view(entry.id).substr(dot + 1) == name) {
      if (match) return std::nullopt;  // ambiguous across schemas
      match = entry.id;
    }
  }
  return match;
}

class QueryRegistryBuilder {
 public:
  explicit QueryRegistryBuilder(Diagnostics& diagnostics) : diagnostics_(diagnostics) {}

  bool contains(const std::string& id) const { return entries_.count(id) > 0; }

  void insert(QueryEntry entry, bool replace) {
    auto it = entries_.find(entry.id);
    if (it != entries_.end()) {
      if (!replace) {
        diagnostics_.error(codes::kDuplicateIdentifier,
                           "'" + entry.id + "' is defined more than once; keeping the first definition", entry.id);
        return;
      }
      diagnostics_.warn(codes::kReplacedDefinition, "'" + entry.id + "' replaced by a later CREATE OR REPLACE",
                        entry.id);
      entries_.erase(it);
    }
    std::string id = entry.id;
    entries_.emplace(std::move(id), std::move(entry));
  }

  QueryDictionary finish() {
    QueryDictionary qd;
    std::vector<QueryEntry> ordered;
    for (auto& [id, entry] : entries_) ordered.push_back(std::move(entry));
    std::sort(ordered.begin(), ordered.end(),
              [](const QueryEntry& a, const QueryEntry& b) { return a.source_index < b.source_index; });
    for (auto& entry : ordered) {
      qd.index_.emplace(entry.id, qd.entries_.size());
      qd.entries_.push_back(std::move(entry));
    }
    return qd;
  }

 private:
  Diagnostics& diagnostics_;
  std::map<std::string, QueryEntry> entries_;
};

QueryDictionary register_statements(const std::vector<LabeledStatement>& statements, Diagnostics& diagnostics,
                                    const RegistryOptions& options) {
  QueryRegistryBuilder builder(diagnostics);
  std::mt19937_64 rng(options.seed ? options.seed : std::random_device{}());
  std::map<std::string, int> label_uses;
  int generated = 0;

  for (std::size_t index = 0; index < statements.size(); ++index) {
    const auto& [stmt, label] = statements[index];
    QueryEntry entry;
    entry.body = stmt.body;
    entry.source_index = index;

    switch (stmt.kind) {
      case StatementKind::CreateView:
      case StatementKind::CreateTableAs:
        entry.id = stmt.name;
        entry.origin =
            stmt.kind == StatementKind::CreateView ? QueryOrigin::CreateView : QueryOrigin::CreateTableAs;
        builder.insert(std::move(entry), stmt.or_replace);
        continue;
      case StatementKind::BareSelect:
        break;
    }

    if (label && !label->empty()) {
      const std::string base = normalize_identifier(*label);
      const int use = label_uses[base]++;
      entry.id = use == 0 ? base : base + "_" + std::to_string(use);
      entry.origin = QueryOrigin::FileNamed;
    } else {
      do {
        entry.id = "query_" + std::to_string(generated++);
        if (options.random_ids) {
          char suffix[17];
          std::snprintf(suffix, sizeof suffix, "%016llx", static_cast<unsigned long long>(rng()));
          entry.id += "_" + std::string(suffix, 8);
        }
      } while (builder.contains(entry.id));
      entry.origin = QueryOrigin::Generated;
    }
    builder.insert(std::move(entry), false);
  }
  return builder.finish();
}

const QueryNode* lookup(const QueryDictionary& qd, std::string_view name) {
  const auto resolved = qd.resolve_name(normalize_identifier(name));
  if (!resolved) return nullptr;
  return &qd.find(*resolved)->body;
}

}  // namespace lineage_forge
