#pragma once

#include <string>
#include <vector>

namespace lineage_forge {

enum class Severity { Warning, Error };

struct Diagnostic {
  Severity severity = Severity::Warning;
  std::string code;
  std::string message;
  std::string query;  // empty when not tied to one query
  bool operator==(const Diagnostic&) const = default;
};

const char* to_string(Severity severity);

class Diagnostics {
 public:
  void warn(std::string code, std::string message, std::string query = {});
  void error(std::string code, std::string message, std::string query = {});
  void add(Diagnostic d) { items_.push_back(std::move(d)); }
  void append(const Diagnostics& other);

  bool has_errors() const;
  bool has_code(std::string_view code) const;
  std::size_t count(std::string_view code) const;
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const std::vector<Diagnostic>& items() const { return items_; }

  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

  bool operator==(const Diagnostics&) const = default;

 private:
  std::vector<Diagnostic> items_;
};

namespace codes {
inline constexpr const char* kParseError = "ParseError";
inline constexpr const char* kUnterminatedString = "UnterminatedString";
inline constexpr const char* kUnterminatedComment = "UnterminatedComment";
inline constexpr const char* kUnsupportedStatement = "UnsupportedStatement";
inline constexpr const char* kDuplicateIdentifier = "DuplicateIdentifier";
inline constexpr const char* kReplacedDefinition = "ReplacedDefinition";
inline constexpr const char* kUnresolvableColumn = "UnresolvableColumn";
inline constexpr const char* kAmbiguousColumn = "AmbiguousColumn";
inline constexpr const char* kUnresolvedStar = "UnresolvedStar";
inline constexpr const char* kUnknownQualifier = "UnknownQualifier";
inline constexpr const char* kSetOpArity = "SetOpArityMismatch";
inline constexpr const char* kCyclicDependency = "CyclicDependency";
inline constexpr const char* kUnresolvedDependency = "UnresolvedDependency";
inline constexpr const char* kSchemaFile = "SchemaFile";
}  // namespace codes

}  // namespace lineage_forge
