#include <cctype>
#include <string>

#include "lineage_forge/diagnostics.hpp"
#include "lineage_forge/sql_frontend.hpp"

namespace lineage_forge {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

std::vector<std::string> split_script(std::string_view script) {
  std::vector<std::string> statements;
  std::string current;
  std::size_t i = 0;
  const std::size_t n = script.size();

  auto flush = [&] {
    std::string stmt = trim(current);
    if (!stmt.empty()) statements.push_back(std::move(stmt));
    current.clear();
  };

  while (i < n) {
    const char c = script[i];
    if (c == '\'' || c == '"' || c == '`') {
      const std::size_t start = i;
      current += c;
      ++i;
      bool closed = false;
      while (i < n) {
        current += script[i];
        if (script[i] == c) {
          // doubled quote is an escape
          if (i + 1 < n && script[i + 1] == c) {
            current += c;
            i += 2;
            continue;
          }
          ++i;
          closed = true;
          break;
        }
        ++i;
      }
      if (!closed) {
        throw ScriptError(codes::kUnterminatedString, start,
                          "unterminated quoted literal starting at byte " + std::to_string(start));
      }
    } else if (c == '-' && i + 1 < n && script[i + 1] == '-') {
      while (i < n && script[i] != '\n') ++i;
      current += ' ';
    } else if (c == '/' && i + 1 < n && script[i + 1] == '*') {
      const std::size_t start = i;
      i += 2;
      while (i + 1 < n && !(script[i] == '*' && script[i + 1] == '/')) ++i;
      if (i + 1 >= n) {
        throw ScriptError(codes::kUnterminatedComment, start,
                          "unterminated block comment starting at byte " + std::to_string(start));
      }
      i += 2;
      current += ' ';
    } else if (c == ';') {
      flush();
      ++i;
    } else {
      current += c;
      ++i;
    }
  }
  flush();
  return statements;
}

}  // namespace lineage_forge
