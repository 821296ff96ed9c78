#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "lineage_forge/ast.hpp"
#include "lineage_forge/schema_catalog.hpp"

namespace lineage_forge::testing {

struct ToyTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<int>>> rows;
};

struct ToySchema {
  std::vector<ToyTable> tables;

  // CREATE TABLE and INSERT statements for SQLite.
  std::string ddl() const;
  void declare_into(SchemaCatalog& catalog) const;
  const ToyTable* find(const std::string& name) const;
};

// 3 to 5 tables named t0.., each with a shared join key `k` (values 0..4)
// and 2 or 3 private columns; at most `max_rows` rows, about 10% NULLs.
ToySchema random_schema(std::mt19937_64& rng, int max_rows = 50);

// Replaces every value of one column with a fresh random value.
void perturb_column(ToySchema& schema, const std::string& table, const std::string& column, std::mt19937_64& rng);

struct GeneratorOptions {
  // Restrict to what SQLite 3.37 executes: no RIGHT/FULL joins, EXTRACT,
  // windows or mixed-precedence set operations.
  bool sqlite_compatible = true;
  int max_depth = 2;
};

// Random query trees over a toy schema. Every alias is unique and every
// unqualified column reference is unique within its scope, so the query has
// the same meaning in SQLite and in the extractor.
class QueryGenerator {
 public:
  QueryGenerator(const ToySchema& schema, std::uint64_t seed, GeneratorOptions options = {});

  QueryNode query();
  // In compatible mode always a bare SELECT.
  NormalizedStatement statement();

 private:
  struct Rel {
    std::string alias;
    std::vector<std::string> columns;
  };
  struct Scope {
    std::vector<Rel> rels;
  };
  struct Cte {
    std::string name;
    std::vector<std::string> columns;
  };
  struct Built {
    QueryNode node;
    std::vector<std::string> columns;
  };

  Built gen_query(int depth, std::optional<std::size_t> arity, bool top);
  Built gen_set_expression(int depth, std::optional<std::size_t> arity, bool top);
  Built gen_select(int depth, std::optional<std::size_t> arity, bool allow_star);
  QueryNode gen_from(int depth, Scope& scope);
  QueryNode gen_from_item(int depth, Scope& scope);
  ExprNode gen_expr(int depth, const Scope& scope);
  ExprNode gen_pred(int depth, const Scope& scope);
  ExprNode gen_aggregate(const Scope& scope);
  ExprNode gen_subquery_scalar(int depth, const Scope& scope);
  ExprNode pick_column(const Scope& scope);
  ExprNode pick_key(const Scope& scope, const Rel& rel);
  ExprNode literal();

  bool chance(double p);
  int uniform(int lo, int hi);
  std::string fresh_alias();

  const ToySchema& schema_;
  std::mt19937_64 rng_;
  GeneratorOptions options_;
  std::vector<std::vector<Cte>> cte_frames_;
  std::vector<const Scope*> outer_;
  int alias_counter_ = 0;
  bool qualify_only_ = false;
};

}  // namespace lineage_forge::testing
