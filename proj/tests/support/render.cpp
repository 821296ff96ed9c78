#include "render.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <stdexcept>

namespace lineage_forge::testing {

namespace {

// Words the parser treats specially in at least one position; quoting them
// keeps every identifier position unambiguous.
constexpr std::array kQuoteWords = {
    "all",      "and",    "as",     "asc",     "between", "by",       "case",    "cast",    "create",   "cross",
    "date",     "desc",   "distinct", "else",  "end",     "except",   "exists",  "extract", "false",    "fetch",
    "from",     "full",   "group",  "having",  "ilike",   "in",       "inner",   "interval", "intersect", "is",
    "join",     "lateral", "left",  "like",    "limit",   "natural",  "not",     "null",    "nulls",    "offset",
    "on",       "or",     "order",  "outer",   "over",    "right",    "select",  "then",    "time",     "timestamp",
    "true",     "union",  "using",  "when",    "where",   "window",   "with",    "returning"};

bool plain_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!(std::islower(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s) {
    if (!(std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) || c == '_')) {
      return false;
    }
  }
  return std::find(kQuoteWords.begin(), kQuoteWords.end(), s) == kQuoteWords.end();
}

std::string ident(const std::string& s) {
  if (plain_identifier(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string dotted(const std::string& name) {
  std::string out;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = name.find('.', start);
    out += ident(name.substr(start, dot == std::string::npos ? std::string::npos : dot - start));
    if (dot == std::string::npos) break;
    out += ".";
    start = dot + 1;
  }
  return out;
}

std::string string_literal(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += '\'';
    out += c;
  }
  return out + "'";
}

std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

std::string join_exprs(const std::vector<ExprNode>& exprs, std::size_t from = 0) {
  std::string out;
  for (std::size_t i = from; i < exprs.size(); ++i) {
    if (i > from) out += ", ";
    out += render(exprs[i]);
  }
  return out;
}

int precedence(SetOpKind op) { return op == SetOpKind::Intersect ? 2 : 1; }

const char* keyword(SetOpKind op) {
  switch (op) {
    case SetOpKind::Union:
      return "UNION";
    case SetOpKind::UnionAll:
      return "UNION ALL";
    case SetOpKind::Intersect:
      return "INTERSECT";
    case SetOpKind::Except:
      return "EXCEPT";
  }
  return "UNION";
}

std::string render_from(const QueryNode& q);
std::string render_select(const Project& p);

std::string render_set_operand(const QueryNode& q, int parent_prec, bool right) {
  if (std::holds_alternative<Project>(q.node)) return render_select(std::get<Project>(q.node));
  if (const auto* s = std::get_if<SetOp>(&q.node)) {
    const int p = precedence(s->op);
    const bool parens = right ? p <= parent_prec : p < parent_prec;
    return parens ? "(" + render(q) + ")" : render(q);
  }
  return "(" + render(q) + ")";
}

std::string render_set_expression(const QueryNode& q) {
  if (const auto* s = std::get_if<SetOp>(&q.node)) {
    const int p = precedence(s->op);
    return render_set_operand(*s->left, p, false) + " " + keyword(s->op) + " " +
           render_set_operand(*s->right, p, true);
  }
  if (const auto* p = std::get_if<Project>(&q.node)) return render_select(*p);
  return "(" + render(q) + ")";
}

std::string render_sorted(const QueryNode& q) {
  if (const auto* s = std::get_if<Sort>(&q.node)) {
    std::string out = render_set_expression(*s->input) + " ORDER BY ";
    for (std::size_t i = 0; i < s->keys.size(); ++i) {
      if (i) out += ", ";
      out += render(s->keys[i].expr);
      if (s->keys[i].descending) out += " DESC";
    }
    return out;
  }
  return render_set_expression(q);
}

std::string render_from(const QueryNode& q) {
  if (const auto* s = std::get_if<Scan>(&q.node)) {
    return s->alias.empty() ? dotted(s->relation) : dotted(s->relation) + " AS " + ident(s->alias);
  }
  if (const auto* d = std::get_if<DerivedTable>(&q.node)) return "(" + render(*d->query) + ") AS " + ident(d->alias);
  if (const auto* j = std::get_if<Join>(&q.node)) {
    std::string right = render_from(*j->right);
    if (std::holds_alternative<Join>(j->right->node)) right = "(" + right + ")";
    std::string out = render_from(*j->left);
    switch (j->kind) {
      case JoinKind::Inner:
        out += " JOIN ";
        break;
      case JoinKind::Left:
        out += " LEFT JOIN ";
        break;
      case JoinKind::Right:
        out += " RIGHT JOIN ";
        break;
      case JoinKind::Full:
        out += " FULL JOIN ";
        break;
      case JoinKind::Cross:
        if (j->condition) throw std::invalid_argument("cross join with a condition");
        out += " CROSS JOIN ";
        break;
    }
    out += right;
    if (j->condition) out += " ON " + render(*j->condition);
    return out;
  }
  throw std::invalid_argument("node cannot appear in FROM");
}

std::string render_select(const Project& p) {
  std::string out = p.distinct ? "SELECT DISTINCT " : "SELECT ";
  for (std::size_t i = 0; i < p.items.size(); ++i) {
    const auto& item = p.items[i];
    if (i) out += ", ";
    if (item.is_star) {
      out += item.star_qualifier.empty() ? "*" : dotted(item.star_qualifier) + ".*";
    } else {
      out += render(*item.expr) + " AS " + ident(item.output_name);
    }
  }
  if (!p.input) return out;

  const QueryNode* cur = &**p.input;
  const GroupBy* group = std::get_if<GroupBy>(&cur->node);
  if (group) cur = &*group->input;
  const Filter* filter = std::get_if<Filter>(&cur->node);
  if (filter) cur = &*filter->input;

  out += " FROM " + render_from(*cur);
  if (filter) out += " WHERE " + render(filter->predicate);
  if (group) {
    if (!group->keys.empty()) out += " GROUP BY " + join_exprs(group->keys);
    if (group->having) out += " HAVING " + render(*group->having);
    if (group->keys.empty() && !group->having) throw std::invalid_argument("empty GroupBy");
  }
  return out;
}

}  // namespace

std::string render(const ExprNode& expr) {
  return std::visit(
      [](const auto& e) -> std::string {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, ColumnRefExpr>) {
          return e.qualifier.empty() ? ident(e.column) : dotted(e.qualifier) + "." + ident(e.column);
        } else if constexpr (std::is_same_v<T, Literal>) {
          switch (e.kind) {
            case Literal::Kind::String:
              return string_literal(e.text);
            case Literal::Kind::Null:
              return "NULL";
            default:
              return e.text;
          }
        } else if constexpr (std::is_same_v<T, FuncCall>) {
          const std::string& n = e.name;
          if (n == kInList || n == kNotInList) {
            return "(" + render(e.args.at(0)) + (n == kInList ? " IN (" : " NOT IN (") + join_exprs(e.args, 1) + "))";
          }
          if (n == kBetween || n == kNotBetween) {
            return "(" + render(e.args.at(0)) + (n == kBetween ? " BETWEEN " : " NOT BETWEEN ") +
                   render(e.args.at(1)) + " AND " + render(e.args.at(2)) + ")";
          }
          if (n == kIsNull) return "(" + render(e.args.at(0)) + " IS NULL)";
          if (n == kIsNotNull) return "(" + render(e.args.at(0)) + " IS NOT NULL)";
          if (n == kExists) return "(EXISTS " + render(e.args.at(0)) + ")";
          if (n == kExtract) {
            return "EXTRACT(" + std::get<Literal>(e.args.at(0).node).text + " FROM " + render(e.args.at(1)) + ")";
          }
          std::string out = ident(n) + "(";
          if (e.star_arg) {
            out += "*";
          } else {
            if (e.distinct) out += "DISTINCT ";
            out += join_exprs(e.args);
          }
          out += ")";
          if (e.has_window) {
            out += " OVER (";
            if (!e.partition_by.empty()) out += "PARTITION BY " + join_exprs(e.partition_by);
            if (!e.window_order.empty()) {
              if (!e.partition_by.empty()) out += " ";
              out += "ORDER BY " + join_exprs(e.window_order);
            }
            out += ")";
          }
          return out;
        } else if constexpr (std::is_same_v<T, BinaryOp>) {
          return "(" + render(*e.lhs) + " " + upper(e.op) + " " + render(*e.rhs) + ")";
        } else if constexpr (std::is_same_v<T, UnaryOp>) {
          return "(" + upper(e.op) + " " + render(*e.operand) + ")";
        } else if constexpr (std::is_same_v<T, CaseExpr>) {
          std::string out = "CASE";
          if (e.operand) out += " " + render(**e.operand);
          for (const auto& b : e.branches) out += " WHEN " + render(*b.when) + " THEN " + render(*b.then);
          if (e.otherwise) out += " ELSE " + render(**e.otherwise);
          return out + " END";
        } else if constexpr (std::is_same_v<T, CastExpr>) {
          return "CAST(" + render(*e.inner) + " AS " + e.type_name + ")";
        } else {
          return "(" + render(*e.query) + ")";
        }
      },
      expr.node);
}

std::string render(const QueryNode& query) {
  if (const auto* w = std::get_if<With>(&query.node)) {
    std::string out = "WITH ";
    for (std::size_t i = 0; i < w->bindings.size(); ++i) {
      if (i) out += ", ";
      out += ident(w->bindings[i].name) + " AS (" + render(*w->bindings[i].body) + ")";
    }
    const QueryNode& in = *w->input;
    if (std::holds_alternative<With>(in.node)) return out + " (" + render(in) + ")";
    return out + " " + render(in);
  }
  if (const auto* l = std::get_if<Limit>(&query.node)) {
    std::string out = render_sorted(*l->input) + " LIMIT " + std::to_string(l->count);
    if (l->offset) out += " OFFSET " + std::to_string(*l->offset);
    return out;
  }
  if (std::holds_alternative<Sort>(query.node)) return render_sorted(query);
  if (std::holds_alternative<SetOp>(query.node) || std::holds_alternative<Project>(query.node)) {
    return render_set_expression(query);
  }
  throw std::invalid_argument("node cannot be rendered as a query");
}

std::string render(const NormalizedStatement& stmt) {
  const std::string replace = stmt.or_replace ? "OR REPLACE " : "";
  switch (stmt.kind) {
    case StatementKind::CreateView:
      return "CREATE " + replace + "VIEW " + dotted(stmt.name) + " AS " + render(stmt.body);
    case StatementKind::CreateTableAs:
      return "CREATE " + replace + "TABLE " + dotted(stmt.name) + " AS " + render(stmt.body);
    case StatementKind::BareSelect:
      break;
  }
  return render(stmt.body);
}

}  // namespace lineage_forge::testing
