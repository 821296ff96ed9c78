#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lineage_forge/ast.hpp"
#include "lineage_forge/diagnostics.hpp"

namespace lineage_forge {

enum class QueryOrigin { CreateView, CreateTableAs, FileNamed, Generated };

const char* to_string(QueryOrigin origin);

struct QueryEntry {
  std::string id;
  QueryNode body;
  QueryOrigin origin = QueryOrigin::Generated;
  std::size_t source_index = 0;
};

// Query Dictionary: identifier -> SELECT body, iterated in source order.
class QueryDictionary {
 public:
  const std::vector<QueryEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // Exact lookup on a normalized identifier.
  const QueryEntry* find(std::string_view id) const;

  // Resolves a normalized relation name to a registered id. An unqualified
  // name matches a schema-qualified entry `s.name` only when unique.
  std::optional<std::string> resolve_name(std::string_view name) const;

 private:
  friend class QueryRegistryBuilder;
  std::vector<QueryEntry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct LabeledStatement {
  NormalizedStatement statement;
  std::optional<std::string> source_label;  // file stem when read from a file
};

struct RegistryOptions {
  bool random_ids = false;
  std::uint64_t seed = 0;  // only used with random_ids; 0 draws from random_device
};

QueryDictionary register_statements(const std::vector<LabeledStatement>& statements, Diagnostics& diagnostics,
                                    const RegistryOptions& options = {});

// Looks up by SQL identifier text, applying unquoted-case folding.
const QueryNode* lookup(const QueryDictionary& qd, std::string_view name);

}  // namespace lineage_forge
