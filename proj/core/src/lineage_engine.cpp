#include "lineage_forge/lineage_engine.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace lineage_forge {

const char* to_string(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::Contributes: return "contributes";
    case EdgeKind::References: return "references";
    case EdgeKind::Both: return "both";
  }
  return "?";
}

std::optional<EdgeKind> edge_kind_from_string(std::string_view text) {
  if (text == "contributes") return EdgeKind::Contributes;
  if (text == "references") return EdgeKind::References;
  if (text == "both") return EdgeKind::Both;
  return std::nullopt;
}

EdgeKind merge_kinds(EdgeKind a, EdgeKind b) { return a == b ? a : EdgeKind::Both; }

const char* to_string(Rule rule) {
  switch (rule) {
    case Rule::ScanTable: return "Scan";
    case Rule::ScanCte: return "ScanCte";
    case Rule::WithBinding: return "With";
    case Rule::DerivedTable: return "DerivedTable";
    case Rule::Subquery: return "Subquery";
    case Rule::Join: return "Join";
    case Rule::Filter: return "Filter";
    case Rule::GroupBy: return "GroupBy";
    case Rule::Sort: return "Sort";
    case Rule::Limit: return "Limit";
    case Rule::SetOp: return "SetOp";
    case Rule::Project: return "Project";
  }
  return "?";
}

std::vector<SourceEdge> classify(const OutputColumn& output, const std::set<ColumnRef>& referenced) {
  std::vector<SourceEdge> edges;
  for (const auto& src : output.contributors) {
    edges.push_back({src, referenced.count(src) ? EdgeKind::Both : EdgeKind::Contributes});
  }
  for (const auto& src : referenced) {
    if (!output.contributors.count(src)) edges.push_back({src, EdgeKind::References});
  }
  std::sort(edges.begin(), edges.end(), [](const SourceEdge& a, const SourceEdge& b) { return a.source < b.source; });
  return edges;
}

const CandidateColumn* CandidateBinding::find(std::string_view column) const {
  auto it = std::find_if(columns.begin(), columns.end(), [&](const CandidateColumn& c) { return c.name == column; });
  return it == columns.end() ? nullptr : &*it;
}

ColumnResolution resolve_column(const std::optional<std::string>& qualifier, const std::string& column,
                                std::span<const CandidateBinding> candidates) {
  ColumnResolution out;
  if (qualifier) {
    const CandidateBinding* binding = nullptr;
    for (const auto& b : candidates) {
      if (binding_matches(*qualifier, b.alias, b.relation)) {
        binding = &b;
        break;
      }
    }
    if (!binding) {
      out.status = ResolveStatus::UnknownQualifier;
      return out;
    }
    if (const auto* col = binding->find(column)) {
      out.refs = col->sources;
      out.status = ResolveStatus::Resolved;
    } else if (!binding->complete) {
      ColumnRef ref{binding->relation, column};
      out.refs.insert(ref);
      out.observed.push_back(std::move(ref));
      out.status = ResolveStatus::Resolved;
    }
    return out;
  }

  std::size_t matches = 0;
  for (const auto& b : candidates) {
    if (const auto* col = b.find(column)) {
      out.refs.insert(col->sources.begin(), col->sources.end());
      ++matches;
    }
  }
  if (matches == 0) {
    for (const auto& b : candidates) {
      if (b.complete) continue;
      ColumnRef ref{b.relation, column};
      if (out.refs.insert(ref).second) out.observed.push_back(std::move(ref));
      ++matches;
    }
  }
  if (matches == 0) {
    out.status = ResolveStatus::Unresolvable;
  } else {
    out.status = matches == 1 ? ResolveStatus::Resolved : ResolveStatus::Ambiguous;
  }
  return out;
}

namespace {

struct DeferredSignal {
  std::string missing;
};

// Finished lineage of a SELECT scope, before it is labelled with a query id.
struct ScopeResult {
  std::set<std::string> tables;
  std::vector<OutputColumn> outputs;
  std::set<ColumnRef> referenced;
};

// FROM-clause state of one SELECT: T, C_ref and C_pos.
struct Scope {
  std::vector<CandidateBinding> candidates;
  std::set<ColumnRef> referenced;
  std::set<std::string> tables;
  std::vector<const ExprNode*> having_alias_refs;
};

std::vector<ColumnRef> as_vector(const std::set<ColumnRef>& s) { return {s.begin(), s.end()}; }

class Extractor {
 public:
  Extractor(std::string query_id, const SchemaCatalog& catalog, const QueryDictionary& qd,
            const ExtractOptions& options)
      : query_id_(std::move(query_id)), catalog_(catalog), qd_(qd), options_(options) {}

  ScopeResult run(const QueryNode& body) { return run_query(body); }

  Diagnostics& diagnostics() { return diagnostics_; }
  std::vector<ColumnRef> observations() const {
    std::vector<ColumnRef> out;
    for (const auto& [relation, columns] : observed_) {
      for (const auto& c : columns) out.push_back({relation, c});
    }
    return out;
  }

 private:
  void trace(Rule rule, std::string subject, std::vector<ColumnRef> columns = {}) {
    if (options_.trace) options_.trace->push_back({rule, std::move(subject), std::move(columns)});
  }

  void warn(const char* code, std::string message) { diagnostics_.warn(code, std::move(message), query_id_); }

  // -- query-level nodes ----------------------------------------------------

  ScopeResult run_query(const QueryNode& node) {
    return std::visit(
        [&](const auto& n) -> ScopeResult {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, With>) {
            return run_with(n);
          } else if constexpr (std::is_same_v<T, SetOp>) {
            return run_set_op(n);
          } else if constexpr (std::is_same_v<T, Project>) {
            return run_project(n, nullptr);
          } else if constexpr (std::is_same_v<T, Sort>) {
            if (const auto* project = std::get_if<Project>(&n.input->node)) return run_project(*project, &n);
            ScopeResult inner = run_query(*n.input);
            apply_outer_sort(n, inner);
            return inner;
          } else if constexpr (std::is_same_v<T, Limit>) {
            ScopeResult inner = run_query(*n.input);
            trace(Rule::Limit, std::to_string(n.count));
            return inner;
          } else {
            throw std::logic_error("relational node in query position");
          }
        },
        node.node);
  }

  ScopeResult run_with(const With& with) {
    ctes_.emplace_back();
    for (const auto& binding : with.bindings) {
      // WITH rule: the binding is extracted in a fresh state and stored in M_CTE.
      ScopeResult result = run_query(*binding.body);
      trace(Rule::WithBinding, binding.name);
      ctes_.back()[binding.name] = std::move(result);
    }
    ScopeResult out = run_query(*with.input);
    ctes_.pop_back();
    return out;
  }

  ScopeResult run_set_op(const SetOp& op) {
    ScopeResult left = run_query(*op.left);
    ScopeResult right = run_query(*op.right);
    if (left.outputs.size() != right.outputs.size()) {
      warn(codes::kSetOpArity, std::string(to_string(op.op)) + " branches project " +
                                   std::to_string(left.outputs.size()) + " and " +
                                   std::to_string(right.outputs.size()) + " columns");
    }
    ScopeResult out;
    out.tables = left.tables;
    out.tables.insert(right.tables.begin(), right.tables.end());
    out.referenced = left.referenced;
    out.referenced.insert(right.referenced.begin(), right.referenced.end());

    // Set Operation rule: every branch's projected columns become C_ref.
    std::set<ColumnRef> projected;
    for (const auto* branch : {&left, &right}) {
      for (const auto& o : branch->outputs) projected.insert(o.contributors.begin(), o.contributors.end());
    }
    out.referenced.insert(projected.begin(), projected.end());

    const std::size_t n = std::min(left.outputs.size(), right.outputs.size());
    for (std::size_t i = 0; i < n; ++i) {
      OutputColumn col = left.outputs[i];
      col.contributors.insert(right.outputs[i].contributors.begin(), right.outputs[i].contributors.end());
      out.outputs.push_back(std::move(col));
    }
    trace(Rule::SetOp, to_string(op.op), as_vector(projected));
    return out;
  }

  ScopeResult run_project(const Project& project, const Sort* sort) {
    Scope scope;
    scopes_.push_back(&scope);
    if (project.input) run_relation(**project.input, scope);

    std::vector<OutputColumn> outputs;
    for (const auto& item : project.items) {
      if (item.is_star) {
        expand_star_item(item, scope, outputs);
      } else {
        outputs.push_back({item.output_name, expr_columns(*item.expr, scope)});
      }
    }

    if (project.distinct) {
      for (const auto& o : outputs) scope.referenced.insert(o.contributors.begin(), o.contributors.end());
    }

    for (const ExprNode* ref_expr : scope.having_alias_refs) {
      const auto& ref = std::get<ColumnRefExpr>(ref_expr->node);
      auto it = std::find_if(outputs.begin(), outputs.end(), [&](const OutputColumn& o) { return o.name == ref.column; });
      if (it != outputs.end()) {
        scope.referenced.insert(it->contributors.begin(), it->contributors.end());
      } else {
        warn(codes::kUnresolvableColumn, "column '" + ref.column + "' matches no candidate");
      }
    }

    std::string names;
    std::set<ColumnRef> sources;
    for (const auto& o : outputs) {
      names += (names.empty() ? "" : ",") + o.name;
      sources.insert(o.contributors.begin(), o.contributors.end());
    }
    trace(Rule::Project, names, as_vector(sources));

    if (sort) {
      std::set<ColumnRef> added;
      for (const auto& key : sort->keys) {
        std::set<ColumnRef> cols;
        if (!sort_key_from_outputs(key.expr, outputs, cols)) cols = expr_columns(key.expr, scope);
        added.insert(cols.begin(), cols.end());
      }
      scope.referenced.insert(added.begin(), added.end());
      trace(Rule::Sort, "", as_vector(added));
    }

    scopes_.pop_back();
    return {std::move(scope.tables), std::move(outputs), std::move(scope.referenced)};
  }

  // ORDER BY <ordinal> or ORDER BY <output alias>.
  static bool sort_key_from_outputs(const ExprNode& expr, const std::vector<OutputColumn>& outputs,
                                    std::set<ColumnRef>& cols) {
    if (const auto* lit = std::get_if<Literal>(&expr.node); lit && lit->kind == Literal::Kind::Number) {
      try {
        const auto pos = std::stoul(lit->text);
        if (pos >= 1 && pos <= outputs.size()) {
          cols = outputs[pos - 1].contributors;
          return true;
        }
      } catch (const std::logic_error&) {
      }
      return false;
    }
    if (const auto* ref = std::get_if<ColumnRefExpr>(&expr.node); ref && ref->qualifier.empty()) {
      for (const auto& o : outputs) {
        if (o.name == ref->column) {
          cols = o.contributors;
          return true;
        }
      }
    }
    return false;
  }

  // ORDER BY over a set operation or CTE-wrapped query: keys name outputs.
  void apply_outer_sort(const Sort& sort, ScopeResult& result) {
    std::set<ColumnRef> added;
    for (const auto& key : sort.keys) {
      std::set<ColumnRef> cols;
      if (sort_key_from_outputs(key.expr, result.outputs, cols)) {
        added.insert(cols.begin(), cols.end());
      } else {
        warn(codes::kUnresolvableColumn, "ORDER BY key does not name an output column");
      }
    }
    result.referenced.insert(added.begin(), added.end());
    trace(Rule::Sort, "", as_vector(added));
  }

  void expand_star_item(const ProjectionItem& item, Scope& scope, std::vector<OutputColumn>& outputs) {
    std::vector<const CandidateBinding*> targets;
    if (!item.star_qualifier.empty()) {
      for (const auto& b : scope.candidates) {
        if (binding_matches(item.star_qualifier, b.alias, b.relation)) {
          targets.push_back(&b);
          break;
        }
      }
      if (targets.empty()) {
        warn(codes::kUnknownQualifier, "star qualifier '" + item.star_qualifier + "' matches no FROM binding");
        return;
      }
    } else {
      for (const auto& b : scope.candidates) targets.push_back(&b);
    }

    for (const CandidateBinding* b : targets) {
      if (b->derived()) {
        for (const auto& col : b->columns) outputs.push_back({col.name, col.sources});
        continue;
      }
      const ScopeBinding binding{b->alias, b->relation};
      const std::optional<std::string> qualifier = b->alias.empty() ? b->relation : b->alias;
      StarExpansion expansion = catalog_.expand_star(qualifier, std::span(&binding, 1));
      if (auto* cols = std::get_if<std::vector<ColumnRef>>(&expansion)) {
        for (auto& ref : *cols) outputs.push_back({ref.column, {ref}});
      } else {
        const auto& blocked = std::get<UnresolvedStar>(expansion);
        warn(codes::kUnresolvedStar,
             "cannot expand '*' over '" + blocked.relation + "': its columns are not fully known");
        outputs.push_back({"*", {ColumnRef{blocked.relation, "*"}}});
      }
    }
  }

  // -- FROM-clause nodes ------------------------------------------------------

  void run_relation(const QueryNode& node, Scope& scope) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Scan>) {
            scan(n, scope);
          } else if constexpr (std::is_same_v<T, DerivedTable>) {
            ScopeResult inner = run_query(*n.query);
            trace(Rule::DerivedTable, n.alias);
            add_derived_binding(n.alias, std::move(inner), scope);
          } else if constexpr (std::is_same_v<T, Join>) {
            run_relation(*n.left, scope);
            run_relation(*n.right, scope);
            std::set<ColumnRef> cols;
            if (n.condition) cols = expr_columns(*n.condition, scope);
            scope.referenced.insert(cols.begin(), cols.end());
            trace(Rule::Join, to_string(n.kind), as_vector(cols));
          } else if constexpr (std::is_same_v<T, Filter>) {
            run_relation(*n.input, scope);
            std::set<ColumnRef> cols = expr_columns(n.predicate, scope);
            scope.referenced.insert(cols.begin(), cols.end());
            trace(Rule::Filter, "", as_vector(cols));
          } else if constexpr (std::is_same_v<T, GroupBy>) {
            run_relation(*n.input, scope);
            std::set<ColumnRef> cols;
            for (const auto& key : n.keys) {
              auto k = expr_columns(key, scope);
              cols.insert(k.begin(), k.end());
            }
            if (n.having) {
              ++having_depth_;
              auto h = expr_columns(*n.having, scope);
              --having_depth_;
              cols.insert(h.begin(), h.end());
            }
            scope.referenced.insert(cols.begin(), cols.end());
            trace(Rule::GroupBy, "", as_vector(cols));
          } else {
            throw std::logic_error("query node in FROM position");
          }
        },
        node.node);
  }

  const ScopeResult* find_cte(const std::string& name) const {
    for (auto it = ctes_.rbegin(); it != ctes_.rend(); ++it) {
      auto found = it->find(name);
      if (found != it->end()) return &found->second;
    }
    return nullptr;
  }

  void add_derived_binding(const std::string& name, ScopeResult inner, Scope& scope) {
    CandidateBinding binding;
    binding.alias = name;
    binding.complete = true;
    for (auto& o : inner.outputs) binding.columns.push_back({o.name, std::move(o.contributors)});
    scope.tables.insert(inner.tables.begin(), inner.tables.end());
    // rows surviving inside the binding depend on its referenced columns
    scope.referenced.insert(inner.referenced.begin(), inner.referenced.end());
    scope.candidates.push_back(std::move(binding));
  }

  void scan(const Scan& s, Scope& scope) {
    if (s.relation.find('.') == std::string::npos) {
      if (const ScopeResult* cte = find_cte(s.relation)) {
        trace(Rule::ScanCte, s.relation);
        add_derived_binding(s.alias.empty() ? s.relation : s.alias, *cte, scope);
        return;
      }
    }

    std::string relation = s.relation;
    bool view_columns_known = false;
    if (auto id = qd_.resolve_name(s.relation)) {
      relation = *id;
      const bool unavailable = options_.unavailable && options_.unavailable->count(relation);
      if (unavailable) {
        warn(codes::kUnresolvedDependency, "'" + relation + "' could not be resolved; treating it as a base table");
      } else if (catalog_.is_resolved_view(relation)) {
        view_columns_known = true;
      } else {
        throw DeferredSignal{relation};
      }
    }

    CandidateBinding binding;
    binding.alias = s.alias;
    binding.relation = relation;
    std::vector<std::string> columns;
    if (auto known = catalog_.columns_of(relation)) {
      columns = known->columns;
      binding.complete = known->complete;
    } else {
      binding.complete = false;
    }
    if (view_columns_known) binding.complete = true;
    if (!binding.complete) {
      for (const auto& c : observed_[relation]) {
        if (std::find(columns.begin(), columns.end(), c) == columns.end()) columns.push_back(c);
      }
    }
    for (auto& c : columns) binding.columns.push_back({c, {ColumnRef{relation, c}}});

    scope.tables.insert(relation);
    scope.candidates.push_back(std::move(binding));
    trace(Rule::ScanTable, relation);
  }

  // -- expressions --------------------------------------------------------------

  std::set<ColumnRef> expr_columns(const ExprNode& expr, Scope& scope) {
    std::set<ColumnRef> out;
    collect(expr, scope, out);
    return out;
  }

  void collect_all(const std::vector<ExprNode>& exprs, Scope& scope, std::set<ColumnRef>& out) {
    for (const auto& e : exprs) collect(e, scope, out);
  }

  void collect(const ExprNode& expr, Scope& scope, std::set<ColumnRef>& out) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, ColumnRefExpr>) {
            auto refs = resolve(n, scope, &expr);
            out.insert(refs.begin(), refs.end());
          } else if constexpr (std::is_same_v<T, Literal>) {
          } else if constexpr (std::is_same_v<T, FuncCall>) {
            collect_all(n.args, scope, out);
            collect_all(n.partition_by, scope, out);
            collect_all(n.window_order, scope, out);
          } else if constexpr (std::is_same_v<T, BinaryOp>) {
            collect(*n.lhs, scope, out);
            collect(*n.rhs, scope, out);
          } else if constexpr (std::is_same_v<T, UnaryOp>) {
            collect(*n.operand, scope, out);
          } else if constexpr (std::is_same_v<T, CaseExpr>) {
            if (n.operand) collect(**n.operand, scope, out);
            for (const auto& b : n.branches) {
              collect(*b.when, scope, out);
              collect(*b.then, scope, out);
            }
            if (n.otherwise) collect(**n.otherwise, scope, out);
          } else if constexpr (std::is_same_v<T, CastExpr>) {
            collect(*n.inner, scope, out);
          } else if constexpr (std::is_same_v<T, SubqueryExpr>) {
            // Subquery rule: extracted in its own state; its sources feed the
            // enclosing expression, its references the enclosing C_ref.
            ScopeResult inner = run_query(*n.query);
            std::set<ColumnRef> sources;
            for (const auto& o : inner.outputs) sources.insert(o.contributors.begin(), o.contributors.end());
            trace(Rule::Subquery, "", as_vector(sources));
            out.insert(sources.begin(), sources.end());
            scope.tables.insert(inner.tables.begin(), inner.tables.end());
            scope.referenced.insert(inner.referenced.begin(), inner.referenced.end());
          }
        },
        expr.node);
  }

  std::set<ColumnRef> resolve(const ColumnRefExpr& ref, Scope& scope, const ExprNode* node) {
    const std::optional<std::string> qualifier =
        ref.qualifier.empty() ? std::nullopt : std::optional<std::string>(ref.qualifier);

    // innermost scope first, then enclosing scopes for correlated references
    ColumnResolution first;
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      Scope& s = **it;
      ColumnResolution r = resolve_column(qualifier, ref.column, s.candidates);
      if (it == scopes_.rbegin()) first = r;
      if (r.status == ResolveStatus::Resolved || r.status == ResolveStatus::Ambiguous) {
        commit_observations(r.observed, s);
        if (r.status == ResolveStatus::Ambiguous) {
          std::string names;
          for (const auto& c : r.refs) names += (names.empty() ? "" : ", ") + c.str();
          warn(codes::kAmbiguousColumn, "column '" + ref.column + "' is ambiguous; attributed to " + names);
        }
        return r.refs;
      }
    }
    (void)scope;

    if (having_depth_ > 0 && !qualifier) {
      scopes_.back()->having_alias_refs.push_back(node);
      return {};
    }
    const std::string shown = qualifier ? *qualifier + "." + ref.column : ref.column;
    if (first.status == ResolveStatus::UnknownQualifier) {
      warn(codes::kUnknownQualifier, "qualifier in '" + shown + "' matches no FROM binding");
    } else {
      warn(codes::kUnresolvableColumn, "column '" + shown + "' matches no candidate");
    }
    return {};
  }

  void commit_observations(const std::vector<ColumnRef>& observed, Scope& scope) {
    for (const auto& ref : observed) {
      auto& cols = observed_[ref.relation];
      if (std::find(cols.begin(), cols.end(), ref.column) == cols.end()) cols.push_back(ref.column);
      for (auto& b : scope.candidates) {
        if (!b.derived() && !b.complete && b.relation == ref.relation && !b.find(ref.column)) {
          b.columns.push_back({ref.column, {ref}});
        }
      }
    }
  }

  std::string query_id_;
  const SchemaCatalog& catalog_;
  const QueryDictionary& qd_;
  const ExtractOptions& options_;
  Diagnostics diagnostics_;
  std::vector<Scope*> scopes_;
  std::vector<std::map<std::string, ScopeResult>> ctes_;
  std::map<std::string, std::vector<std::string>> observed_;
  int having_depth_ = 0;
};

}  // namespace

ExtractionResult extract(std::string_view query_id, const QueryNode& body, const SchemaCatalog& catalog,
                         const QueryDictionary& qd, const ExtractOptions& options) {
  Extractor extractor(std::string(query_id), catalog, qd, options);
  ExtractionResult result;
  try {
    ScopeResult scope = extractor.run(body);
    QueryLineage lineage;
    lineage.query_id = std::string(query_id);
    lineage.tables = std::move(scope.tables);
    lineage.outputs = std::move(scope.outputs);
    lineage.referenced = std::move(scope.referenced);
    result.outcome = std::move(lineage);
    result.diagnostics = std::move(extractor.diagnostics());
    result.observations = extractor.observations();
  } catch (const DeferredSignal& signal) {
    result.outcome = Deferred{signal.missing};
  }
  return result;
}

ExtractionResult extract(const NormalizedStatement& stmt, const SchemaCatalog& catalog, const QueryDictionary& qd,
                         const ExtractOptions& options) {
  return extract(stmt.name.empty() ? std::string("query") : stmt.name, stmt.body, catalog, qd, options);
}

}  // namespace lineage_forge
