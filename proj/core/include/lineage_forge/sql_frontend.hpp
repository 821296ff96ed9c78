#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lineage_forge/ast.hpp"

namespace lineage_forge {

// Raised by split_script for unterminated literals or block comments.
class ScriptError : public std::runtime_error {
 public:
  ScriptError(std::string code, std::size_t offset, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)), offset_(offset) {}
  const std::string& code() const { return code_; }
  std::size_t offset() const { return offset_; }

 private:
  std::string code_;
  std::size_t offset_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t position, const std::string& message)
      : std::runtime_error(message), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Statement kinds outside the subset (INSERT, UPDATE, other DDL). The caller
// skips these with a diagnostic.
class UnsupportedStatement : public ParseError {
 public:
  using ParseError::ParseError;
};

// Splits a script on top-level `;`. Comments are stripped, empty fragments
// dropped, order preserved. Throws ScriptError.
std::vector<std::string> split_script(std::string_view script_text);

// Parses one statement of the supported subset. Stars stay unexpanded.
NormalizedStatement parse_statement(std::string_view sql_text);

// Unquoted identifiers fold to lowercase; "quoted" ones keep their case.
// Accepts dotted paths such as `Sales."Orders"`.
std::string normalize_identifier(std::string_view text);

}  // namespace lineage_forge
