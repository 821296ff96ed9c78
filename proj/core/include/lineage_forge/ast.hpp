#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace lineage_forge {

// Owning pointer with value semantics: copies deep-clone, == compares pointees.
template <typename T>
class Box {
 public:
  Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}  // NOLINT
  Box(const Box& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
  Box(Box&&) noexcept = default;
  Box& operator=(const Box& other) {
    if (this != &other) ptr_ = std::make_unique<T>(*other.ptr_);
    return *this;
  }
  Box& operator=(Box&&) noexcept = default;
  ~Box() = default;

  const T& operator*() const { return *ptr_; }
  T& operator*() { return *ptr_; }
  const T* operator->() const { return ptr_.get(); }
  T* operator->() { return ptr_.get(); }

  friend bool operator==(const Box& a, const Box& b) { return *a.ptr_ == *b.ptr_; }

 private:
  std::unique_ptr<T> ptr_;
};

struct ExprNode;
struct QueryNode;

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

struct ColumnRefExpr {
  std::string qualifier;  // empty when unqualified; may be "schema.table"
  std::string column;
  bool operator==(const ColumnRefExpr&) const = default;
};

struct Literal {
  enum class Kind { Number, String, Null, Boolean, Keyword };
  Kind kind = Kind::Number;
  std::string text;
  bool operator==(const Literal&) const = default;
};

// Function calls, aggregates and the predicate forms without their own node.
// Predicate forms use reserved names: see kInList, kBetween and friends.
struct FuncCall {
  std::string name;
  std::vector<ExprNode> args;
  bool star_arg = false;  // count(*)
  bool distinct = false;  // count(DISTINCT x)
  bool has_window = false;
  std::vector<ExprNode> partition_by;
  std::vector<ExprNode> window_order;
  bool operator==(const FuncCall&) const;
};

inline constexpr const char* kInList = "$in";
inline constexpr const char* kNotInList = "$not_in";
inline constexpr const char* kBetween = "$between";
inline constexpr const char* kNotBetween = "$not_between";
inline constexpr const char* kIsNull = "$is_null";
inline constexpr const char* kIsNotNull = "$is_not_null";
inline constexpr const char* kExists = "$exists";
inline constexpr const char* kExtract = "extract";

struct BinaryOp {
  std::string op;  // "+", "=", "and", "like", "in", "not in", ...
  Box<ExprNode> lhs;
  Box<ExprNode> rhs;
  bool operator==(const BinaryOp&) const = default;
};

struct UnaryOp {
  std::string op;  // "-", "+", "not"
  Box<ExprNode> operand;
  bool operator==(const UnaryOp&) const = default;
};

struct CaseBranch {
  Box<ExprNode> when;
  Box<ExprNode> then;
  bool operator==(const CaseBranch&) const = default;
};

struct CaseExpr {
  std::optional<Box<ExprNode>> operand;
  std::vector<CaseBranch> branches;
  std::optional<Box<ExprNode>> otherwise;
  bool operator==(const CaseExpr&) const = default;
};

struct CastExpr {
  Box<ExprNode> inner;
  std::string type_name;
  bool operator==(const CastExpr&) const = default;
};

struct SubqueryExpr {
  Box<QueryNode> query;
  bool operator==(const SubqueryExpr&) const;
};

struct ExprNode {
  std::variant<ColumnRefExpr, Literal, FuncCall, BinaryOp, UnaryOp, CaseExpr, CastExpr, SubqueryExpr> node;
  bool operator==(const ExprNode&) const = default;
};

inline bool FuncCall::operator==(const FuncCall& o) const {
  return name == o.name && args == o.args && star_arg == o.star_arg && distinct == o.distinct &&
         has_window == o.has_window && partition_by == o.partition_by && window_order == o.window_order;
}

// ---------------------------------------------------------------------------
// Relational nodes
// ---------------------------------------------------------------------------

struct Scan {
  std::string relation;  // normalized, possibly "schema.name"
  std::string alias;     // empty when unaliased
  bool operator==(const Scan&) const = default;
};

struct ProjectionItem {
  std::optional<ExprNode> expr;  // absent iff is_star
  std::string output_name;
  bool is_star = false;
  std::string star_qualifier;  // non-empty only for `t.*`
  bool operator==(const ProjectionItem&) const = default;
};

struct Project {
  std::vector<ProjectionItem> items;
  bool distinct = false;
  std::optional<Box<QueryNode>> input;  // absent for sourceless SELECTs
  bool operator==(const Project&) const = default;
};

struct Filter {
  ExprNode predicate;
  Box<QueryNode> input;
  bool operator==(const Filter&) const = default;
};

enum class JoinKind { Inner, Left, Right, Full, Cross };

struct Join {
  JoinKind kind = JoinKind::Inner;
  std::optional<ExprNode> condition;
  Box<QueryNode> left;
  Box<QueryNode> right;
  bool operator==(const Join&) const = default;
};

enum class SetOpKind { Union, UnionAll, Intersect, Except };

struct SetOp {
  SetOpKind op = SetOpKind::Union;
  Box<QueryNode> left;
  Box<QueryNode> right;
  bool operator==(const SetOp&) const = default;
};

struct CteBinding {
  std::string name;
  Box<QueryNode> body;
  bool operator==(const CteBinding&) const = default;
};

struct With {
  std::vector<CteBinding> bindings;
  Box<QueryNode> input;
  bool operator==(const With&) const = default;
};

struct DerivedTable {
  std::string alias;
  Box<QueryNode> query;
  bool operator==(const DerivedTable&) const = default;
};

struct GroupBy {
  std::vector<ExprNode> keys;
  std::optional<ExprNode> having;
  Box<QueryNode> input;
  bool operator==(const GroupBy&) const = default;
};

struct SortKey {
  ExprNode expr;
  bool descending = false;
  bool operator==(const SortKey&) const = default;
};

struct Sort {
  std::vector<SortKey> keys;
  Box<QueryNode> input;
  bool operator==(const Sort&) const = default;
};

struct Limit {
  std::int64_t count = 0;
  std::optional<std::int64_t> offset;
  Box<QueryNode> input;
  bool operator==(const Limit&) const = default;
};

struct QueryNode {
  std::variant<Scan, Project, Filter, Join, SetOp, With, DerivedTable, GroupBy, Sort, Limit> node;
  bool operator==(const QueryNode&) const = default;
};

inline bool SubqueryExpr::operator==(const SubqueryExpr& o) const { return query == o.query; }

enum class StatementKind { CreateView, CreateTableAs, BareSelect };

struct NormalizedStatement {
  StatementKind kind = StatementKind::BareSelect;
  std::string name;  // set for Create*
  bool or_replace = false;
  QueryNode body;
  bool operator==(const NormalizedStatement&) const = default;
};

const char* to_string(JoinKind kind);
const char* to_string(SetOpKind kind);
const char* to_string(StatementKind kind);

}  // namespace lineage_forge
