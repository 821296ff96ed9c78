#include <algorithm>
#include <cctype>
#include <array>
#include <set>
#include <string>

#include "lexer.hpp"
#include "lineage_forge/sql_frontend.hpp"

namespace lineage_forge {

using detail::Token;
using detail::TokenKind;

namespace {

constexpr std::array kReserved = {
    "all",    "and",    "as",      "asc",       "between", "by",     "case",   "cross",  "desc",
    "distinct", "else", "end",     "except",    "exists",  "fetch",  "from",   "full",   "group",
    "having", "in",     "inner",   "intersect", "is",      "join",   "lateral", "left",  "like",
    "ilike",  "limit",  "natural", "not",       "null",    "nulls",  "offset", "on",     "or",
    "order",  "outer",  "right",   "select",    "then",    "union",  "using",  "when",   "where",
    "window", "with",   "returning"};

bool is_reserved(const std::string& word) {
  return std::find(kReserved.begin(), kReserved.end(), word) != kReserved.end();
}

class Parser {
 public:
  explicit Parser(std::string_view sql) : tokens_(detail::tokenize(sql)) {}

  NormalizedStatement statement() {
    NormalizedStatement stmt;
    if (is_kw("create")) {
      advance();
      if (accept_kw("or")) {
        expect_kw("replace");
        stmt.or_replace = true;
      }
      while (accept_kw("temp") || accept_kw("temporary") || accept_kw("materialized")) {
      }
      if (accept_kw("view")) {
        stmt.kind = StatementKind::CreateView;
      } else if (accept_kw("table")) {
        stmt.kind = StatementKind::CreateTableAs;
      } else {
        throw UnsupportedStatement(peek().offset, "unsupported CREATE statement");
      }
      if (is_kw("if")) {
        advance();
        expect_kw("not");
        expect_kw("exists");
      }
      stmt.name = qualified_name();
      if (is_sym("(")) {
        if (stmt.kind == StatementKind::CreateTableAs) {
          throw UnsupportedStatement(peek().offset, "CREATE TABLE with a column list is not a query definition");
        }
        fail("view column lists are not supported");
      }
      if (!accept_kw("as")) {
        throw UnsupportedStatement(peek().offset, "CREATE without AS query is not a query definition");
      }
      stmt.body = query();
    } else if (is_kw("select") || is_kw("with") || is_sym("(")) {
      stmt.kind = StatementKind::BareSelect;
      stmt.body = query();
    } else if (peek().kind == TokenKind::End) {
      throw ParseError(peek().offset, "empty statement");
    } else {
      throw UnsupportedStatement(peek().offset, "unsupported statement '" + peek().text + "'");
    }
    accept_sym(";");
    if (peek().kind != TokenKind::End) fail("unexpected trailing input");
    return stmt;
  }

 private:
  // -- token helpers --------------------------------------------------------

  const Token& peek(std::size_t k = 0) const { return tokens_[std::min(pos_ + k, tokens_.size() - 1)]; }
  void advance() {
    if (pos_ + 1 < tokens_.size()) ++pos_;
  }
  bool is_kw(std::string_view kw, std::size_t k = 0) const {
    return peek(k).kind == TokenKind::Ident && peek(k).text == kw;
  }
  bool is_sym(std::string_view s, std::size_t k = 0) const {
    return peek(k).kind == TokenKind::Symbol && peek(k).text == s;
  }
  bool accept_kw(std::string_view kw) {
    if (!is_kw(kw)) return false;
    advance();
    return true;
  }
  bool accept_sym(std::string_view s) {
    if (!is_sym(s)) return false;
    advance();
    return true;
  }
  void expect_kw(std::string_view kw) {
    if (!accept_kw(kw)) fail("expected " + std::string(kw));
  }
  void expect_sym(std::string_view s) {
    if (!accept_sym(s)) fail("expected '" + std::string(s) + "'");
  }
  [[noreturn]] void fail(const std::string& message) const {
    const Token& t = peek();
    std::string near = t.kind == TokenKind::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(t.offset, message + " near " + near);
  }

  bool at_identifier() const {
    return peek().kind == TokenKind::QuotedIdent || (peek().kind == TokenKind::Ident && !is_reserved(peek().text));
  }

  std::string identifier() {
    if (!at_identifier()) fail("expected identifier");
    std::string text = peek().text;
    advance();
    return text;
  }

  std::string qualified_name() {
    std::string name = identifier();
    while (is_sym(".") && (peek(1).kind == TokenKind::Ident || peek(1).kind == TokenKind::QuotedIdent)) {
      advance();
      name += "." + identifier();
    }
    return name;
  }

  std::optional<std::string> optional_alias() {
    if (accept_kw("as")) return identifier();
    if (at_identifier()) return identifier();
    return std::nullopt;
  }

  // -- queries --------------------------------------------------------------

  QueryNode query() {
    std::vector<CteBinding> bindings;
    if (accept_kw("with")) {
      if (is_kw("recursive")) fail("recursive CTEs are not supported");
      std::set<std::string> names;
      do {
        std::string name = identifier();
        if (is_sym("(")) fail("CTE column lists are not supported");
        expect_kw("as");
        if (is_kw("materialized") || (is_kw("not") && is_kw("materialized", 1))) {
          accept_kw("not");
          advance();
        }
        expect_sym("(");
        QueryNode body = query();
        expect_sym(")");
        if (!names.insert(name).second) fail("duplicate CTE name '" + name + "'");
        bindings.push_back({std::move(name), std::move(body)});
      } while (accept_sym(","));
    }

    QueryNode body = set_expression();

    if (is_kw("order") && is_kw("by", 1)) {
      advance();
      advance();
      body = QueryNode{Sort{sort_keys(), std::move(body)}};
    }
    if (accept_kw("limit")) {
      Limit limit{integer(), std::nullopt, std::move(body)};
      if (accept_kw("offset")) limit.offset = integer();
      body = QueryNode{std::move(limit)};
    }

    if (!bindings.empty()) return QueryNode{With{std::move(bindings), std::move(body)}};
    return body;
  }

  std::int64_t integer() {
    if (peek().kind != TokenKind::Number) fail("expected integer");
    try {
      std::size_t used = 0;
      const std::int64_t value = std::stoll(peek().text, &used);
      if (used != peek().text.size()) fail("expected integer");
      advance();
      return value;
    } catch (const std::logic_error&) {
      fail("expected integer");
    }
  }

  std::vector<SortKey> sort_keys() {
    std::vector<SortKey> keys;
    do {
      SortKey key{expression(), false};
      if (accept_kw("desc")) {
        key.descending = true;
      } else {
        accept_kw("asc");
      }
      if (accept_kw("nulls")) {
        if (!accept_kw("first")) expect_kw("last");
      }
      keys.push_back(std::move(key));
    } while (accept_sym(","));
    return keys;
  }

  // UNION / EXCEPT bind looser than INTERSECT.
  QueryNode set_expression() {
    QueryNode left = intersect_expression();
    while (is_kw("union") || is_kw("except")) {
      SetOpKind op = SetOpKind::Except;
      if (accept_kw("union")) {
        op = accept_kw("all") ? SetOpKind::UnionAll : SetOpKind::Union;
        accept_kw("distinct");
      } else {
        advance();
      }
      left = QueryNode{SetOp{op, std::move(left), intersect_expression()}};
    }
    return left;
  }

  QueryNode intersect_expression() {
    QueryNode left = select_primary();
    while (accept_kw("intersect")) {
      accept_kw("distinct");
      left = QueryNode{SetOp{SetOpKind::Intersect, std::move(left), select_primary()}};
    }
    return left;
  }

  QueryNode select_primary() {
    if (accept_sym("(")) {
      QueryNode inner = query();
      expect_sym(")");
      return inner;
    }
    return select_core();
  }

  QueryNode select_core() {
    expect_kw("select");
    Project project;
    if (accept_kw("distinct")) {
      if (is_kw("on")) fail("DISTINCT ON is not supported");
      project.distinct = true;
    } else {
      accept_kw("all");
    }
    do {
      project.items.push_back(projection_item(project.items.size()));
    } while (accept_sym(","));

    std::optional<QueryNode> input;
    if (accept_kw("from")) input = from_clause();
    if (accept_kw("where")) {
      if (!input) fail("WHERE without FROM is not supported");
      ExprNode predicate = expression();
      input = QueryNode{Filter{std::move(predicate), std::move(*input)}};
    }
    std::vector<ExprNode> keys;
    std::optional<ExprNode> having;
    bool grouped = false;
    if (is_kw("group") && is_kw("by", 1)) {
      advance();
      advance();
      grouped = true;
      do {
        keys.push_back(expression());
      } while (accept_sym(","));
    }
    if (accept_kw("having")) {
      grouped = true;
      having = expression();
    }
    if (grouped) {
      if (!input) fail("GROUP BY without FROM is not supported");
      input = QueryNode{GroupBy{std::move(keys), std::move(having), std::move(*input)}};
    }
    if (input) project.input = Box<QueryNode>(std::move(*input));
    return QueryNode{std::move(project)};
  }

  bool at_qualified_star() const {
    std::size_t k = 0;
    while (true) {
      const Token& t = peek(k);
      if (t.kind != TokenKind::Ident && t.kind != TokenKind::QuotedIdent) return false;
      if (!(peek(k + 1).kind == TokenKind::Symbol && peek(k + 1).text == ".")) return false;
      if (peek(k + 2).kind == TokenKind::Symbol && peek(k + 2).text == "*") return true;
      k += 2;
    }
  }

  ProjectionItem projection_item(std::size_t ordinal) {
    ProjectionItem item;
    if (accept_sym("*")) {
      item.is_star = true;
      item.output_name = "*";
      return item;
    }
    if (at_qualified_star()) {
      std::string qualifier = identifier();
      while (accept_sym(".")) {
        if (accept_sym("*")) break;
        qualifier += "." + identifier();
      }
      item.is_star = true;
      item.star_qualifier = std::move(qualifier);
      item.output_name = "*";
      return item;
    }
    item.expr = expression();
    if (auto alias = optional_alias()) {
      item.output_name = *alias;
    } else if (const auto* ref = std::get_if<ColumnRefExpr>(&item.expr->node)) {
      item.output_name = ref->column;
    } else {
      item.output_name = "expr_" + std::to_string(ordinal);
    }
    return item;
  }

  QueryNode from_clause() {
    QueryNode left = table_reference();
    while (accept_sym(",")) {
      left = QueryNode{Join{JoinKind::Cross, std::nullopt, std::move(left), table_reference()}};
    }
    return left;
  }

  QueryNode table_reference() {
    QueryNode left = from_primary();
    while (true) {
      JoinKind kind = JoinKind::Inner;
      if (is_kw("natural")) fail("NATURAL joins are not supported");
      if (accept_kw("join")) {
        kind = JoinKind::Inner;
      } else if (is_kw("inner") && is_kw("join", 1)) {
        advance();
        advance();
      } else if (is_kw("left") || is_kw("right") || is_kw("full")) {
        kind = is_kw("left") ? JoinKind::Left : is_kw("right") ? JoinKind::Right : JoinKind::Full;
        advance();
        accept_kw("outer");
        expect_kw("join");
      } else if (is_kw("cross") && is_kw("join", 1)) {
        advance();
        advance();
        kind = JoinKind::Cross;
      } else {
        break;
      }
      if (is_kw("lateral")) fail("LATERAL joins are not supported");
      QueryNode right = from_primary();
      std::optional<ExprNode> condition;
      if (kind != JoinKind::Cross) {
        if (accept_kw("on")) {
          condition = expression();
        } else if (is_kw("using")) {
          fail("JOIN ... USING is not supported");
        }
      }
      left = QueryNode{Join{kind, std::move(condition), std::move(left), std::move(right)}};
    }
    return left;
  }

  QueryNode from_primary() {
    if (is_sym("(")) {
      advance();
      if (is_kw("select") || is_kw("with") || is_sym("(")) {
        QueryNode inner = query();
        expect_sym(")");
        auto alias = optional_alias();
        std::string name = alias ? *alias : "derived_" + std::to_string(derived_counter_++);
        return QueryNode{DerivedTable{std::move(name), std::move(inner)}};
      }
      QueryNode nested = table_reference();
      expect_sym(")");
      return nested;
    }
    if (is_kw("lateral")) fail("LATERAL joins are not supported");
    Scan scan;
    scan.relation = qualified_name();
    if (is_sym("(")) fail("table functions are not supported");
    if (auto alias = optional_alias()) scan.alias = *alias;
    return QueryNode{std::move(scan)};
  }

  // -- expressions ----------------------------------------------------------

  ExprNode expression() { return or_expression(); }

  static ExprNode binary(std::string op, ExprNode lhs, ExprNode rhs) {
    return ExprNode{BinaryOp{std::move(op), std::move(lhs), std::move(rhs)}};
  }

  ExprNode or_expression() {
    ExprNode left = and_expression();
    while (accept_kw("or")) left = binary("or", std::move(left), and_expression());
    return left;
  }

  ExprNode and_expression() {
    ExprNode left = not_expression();
    while (accept_kw("and")) left = binary("and", std::move(left), not_expression());
    return left;
  }

  ExprNode not_expression() {
    if (accept_kw("not")) return ExprNode{UnaryOp{"not", not_expression()}};
    return comparison();
  }

  ExprNode comparison() {
    ExprNode left = concat_expression();
    while (true) {
      if (accept_kw("is")) {
        const bool negated = accept_kw("not");
        expect_kw("null");
        FuncCall call;
        call.name = negated ? kIsNotNull : kIsNull;
        call.args.push_back(std::move(left));
        left = ExprNode{std::move(call)};
        continue;
      }
      bool negated = false;
      if (is_kw("not") && (is_kw("in", 1) || is_kw("between", 1) || is_kw("like", 1) || is_kw("ilike", 1))) {
        advance();
        negated = true;
      }
      if (accept_kw("in")) {
        expect_sym("(");
        if (is_kw("select") || is_kw("with")) {
          QueryNode sub = query();
          expect_sym(")");
          left = binary(negated ? "not in" : "in", std::move(left), ExprNode{SubqueryExpr{std::move(sub)}});
        } else {
          FuncCall call;
          call.name = negated ? kNotInList : kInList;
          call.args.push_back(std::move(left));
          do {
            call.args.push_back(expression());
          } while (accept_sym(","));
          expect_sym(")");
          left = ExprNode{std::move(call)};
        }
        continue;
      }
      if (accept_kw("between")) {
        FuncCall call;
        call.name = negated ? kNotBetween : kBetween;
        call.args.push_back(std::move(left));
        call.args.push_back(concat_expression());
        expect_kw("and");
        call.args.push_back(concat_expression());
        left = ExprNode{std::move(call)};
        continue;
      }
      if (is_kw("like") || is_kw("ilike")) {
        std::string op = peek().text;
        advance();
        if (negated) op = "not " + op;
        left = binary(std::move(op), std::move(left), concat_expression());
        continue;
      }
      if (negated) fail("expected IN, BETWEEN or LIKE after NOT");
      static constexpr std::array kComparisons = {"=", "==", "<>", "!=", "<", "<=", ">", ">="};
      if (peek().kind == TokenKind::Symbol &&
          std::find(kComparisons.begin(), kComparisons.end(), peek().text) != kComparisons.end()) {
        std::string op = peek().text;
        if (op == "==") op = "=";
        if (op == "!=") op = "<>";
        advance();
        left = binary(std::move(op), std::move(left), concat_expression());
        continue;
      }
      return left;
    }
  }

  ExprNode concat_expression() {
    ExprNode left = additive();
    while (accept_sym("||")) left = binary("||", std::move(left), additive());
    return left;
  }

  ExprNode additive() {
    ExprNode left = multiplicative();
    while (is_sym("+") || is_sym("-")) {
      std::string op = peek().text;
      advance();
      left = binary(std::move(op), std::move(left), multiplicative());
    }
    return left;
  }

  ExprNode multiplicative() {
    ExprNode left = unary();
    while (is_sym("*") || is_sym("/") || is_sym("%")) {
      std::string op = peek().text;
      advance();
      left = binary(std::move(op), std::move(left), unary());
    }
    return left;
  }

  ExprNode unary() {
    if (is_sym("-") || is_sym("+")) {
      std::string op = peek().text;
      advance();
      return ExprNode{UnaryOp{std::move(op), unary()}};
    }
    ExprNode value = primary();
    while (accept_sym("::")) value = ExprNode{CastExpr{std::move(value), type_name()}};
    return value;
  }

  std::string type_name() {
    if (peek().kind != TokenKind::Ident) fail("expected type name");
    std::string name = peek().text;
    advance();
    // multi-word types such as `double precision`
    while (peek().kind == TokenKind::Ident && !is_reserved(peek().text) && !is_kw("as")) {
      name += " " + peek().text;
      advance();
    }
    if (accept_sym("(")) {
      name += "(";
      bool first = true;
      do {
        if (!first) name += ",";
        first = false;
        if (peek().kind != TokenKind::Number) fail("expected type modifier");
        name += peek().text;
        advance();
      } while (accept_sym(","));
      expect_sym(")");
      name += ")";
    }
    return name;
  }

  ExprNode primary() {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::Number: {
        Literal lit{Literal::Kind::Number, t.text};
        advance();
        return ExprNode{std::move(lit)};
      }
      case TokenKind::String: {
        Literal lit{Literal::Kind::String, t.text};
        advance();
        return ExprNode{std::move(lit)};
      }
      case TokenKind::Symbol:
        if (accept_sym("(")) {
          if (is_kw("select") || is_kw("with")) {
            QueryNode sub = query();
            expect_sym(")");
            return ExprNode{SubqueryExpr{std::move(sub)}};
          }
          ExprNode inner = expression();
          if (is_sym(",")) fail("row value constructors are not supported");
          expect_sym(")");
          return inner;
        }
        fail("expected expression");
      case TokenKind::End:
        fail("expected expression");
      case TokenKind::QuotedIdent:
        return column_or_call();
      case TokenKind::Ident:
        break;
    }

    if (accept_kw("null")) return ExprNode{Literal{Literal::Kind::Null, "null"}};
    if (is_kw("true") || is_kw("false")) {
      Literal lit{Literal::Kind::Boolean, t.text};
      advance();
      return ExprNode{std::move(lit)};
    }
    if (accept_kw("case")) return case_expression();
    if (is_kw("cast") && is_sym("(", 1)) {
      advance();
      advance();
      ExprNode inner = expression();
      expect_kw("as");
      std::string type = type_name();
      expect_sym(")");
      return ExprNode{CastExpr{std::move(inner), std::move(type)}};
    }
    if (is_kw("exists") && is_sym("(", 1)) {
      advance();
      advance();
      QueryNode sub = query();
      expect_sym(")");
      FuncCall call;
      call.name = kExists;
      call.args.push_back(ExprNode{SubqueryExpr{std::move(sub)}});
      return ExprNode{std::move(call)};
    }
    if (is_kw("extract") && is_sym("(", 1)) {
      advance();
      advance();
      if (peek().kind != TokenKind::Ident) fail("expected EXTRACT field");
      Literal field{Literal::Kind::Keyword, peek().text};
      advance();
      expect_kw("from");
      FuncCall call;
      call.name = kExtract;
      call.args.push_back(ExprNode{std::move(field)});
      call.args.push_back(expression());
      expect_sym(")");
      return ExprNode{std::move(call)};
    }
    if ((is_kw("date") || is_kw("timestamp") || is_kw("time") || is_kw("interval")) &&
        peek(1).kind == TokenKind::String) {
      std::string type = t.text;
      advance();
      Literal lit{Literal::Kind::String, peek().text};
      advance();
      return ExprNode{CastExpr{ExprNode{std::move(lit)}, std::move(type)}};
    }
    if (is_reserved(t.text)) fail("unexpected keyword");
    return column_or_call();
  }

  ExprNode case_expression() {
    CaseExpr expr;
    if (!is_kw("when")) expr.operand = Box<ExprNode>(expression());
    while (accept_kw("when")) {
      ExprNode when = expression();
      expect_kw("then");
      expr.branches.push_back({std::move(when), expression()});
    }
    if (expr.branches.empty()) fail("CASE without WHEN");
    if (accept_kw("else")) expr.otherwise = Box<ExprNode>(expression());
    expect_kw("end");
    return ExprNode{std::move(expr)};
  }

  ExprNode column_or_call() {
    std::vector<std::string> parts{peek().text};
    advance();
    if (accept_sym("(")) {
      FuncCall call;
      call.name = parts.front();
      if (accept_sym("*")) {
        call.star_arg = true;
      } else if (!is_sym(")")) {
        if (accept_kw("distinct")) call.distinct = true;
        do {
          call.args.push_back(expression());
        } while (accept_sym(","));
      }
      expect_sym(")");
      if (accept_kw("over")) {
        call.has_window = true;
        expect_sym("(");
        if (is_kw("partition")) {
          advance();
          expect_kw("by");
          do {
            call.partition_by.push_back(expression());
          } while (accept_sym(","));
        }
        if (is_kw("order") && is_kw("by", 1)) {
          advance();
          advance();
          for (auto& key : sort_keys()) call.window_order.push_back(std::move(key.expr));
        }
        if (is_kw("rows") || is_kw("range")) fail("window frames are not supported");
        expect_sym(")");
      }
      return ExprNode{std::move(call)};
    }
    while (is_sym(".") && (peek(1).kind == TokenKind::Ident || peek(1).kind == TokenKind::QuotedIdent)) {
      advance();
      parts.push_back(peek().text);
      advance();
    }
    ColumnRefExpr ref;
    ref.column = parts.back();
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
      if (i) ref.qualifier += ".";
      ref.qualifier += parts[i];
    }
    return ExprNode{std::move(ref)};
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  int derived_counter_ = 0;
};

}  // namespace

NormalizedStatement parse_statement(std::string_view sql_text) {
  Parser parser(sql_text);
  return parser.statement();
}

std::string normalize_identifier(std::string_view text) {
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '"' || text[i] == '`') {
      const char close = text[i++];
      while (i < text.size()) {
        if (text[i] == close) {
          if (i + 1 < text.size() && text[i + 1] == close) {
            out += close;
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        out += text[i++];
      }
    } else {
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(text[i++])));
    }
  }
  return out;
}

const char* to_string(JoinKind kind) {
  switch (kind) {
    case JoinKind::Inner: return "INNER";
    case JoinKind::Left: return "LEFT";
    case JoinKind::Right: return "RIGHT";
    case JoinKind::Full: return "FULL";
    case JoinKind::Cross: return "CROSS";
  }
  return "?";
}

const char* to_string(SetOpKind kind) {
  switch (kind) {
    case SetOpKind::Union: return "UNION";
    case SetOpKind::UnionAll: return "UNION ALL";
    case SetOpKind::Intersect: return "INTERSECT";
    case SetOpKind::Except: return "EXCEPT";
  }
  return "?";
}

const char* to_string(StatementKind kind) {
  switch (kind) {
    case StatementKind::CreateView: return "CreateView";
    case StatementKind::CreateTableAs: return "CreateTableAs";
    case StatementKind::BareSelect: return "BareSelect";
  }
  return "?";
}

}  // namespace lineage_forge
