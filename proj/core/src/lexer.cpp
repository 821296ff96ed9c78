#include "lexer.hpp"

#include <cctype>

#include "lineage_forge/sql_frontend.hpp"

namespace lineage_forge::detail {

namespace {

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || static_cast<unsigned char>(c) >= 0x80;
}

bool is_ident_char(char c) {
  return is_ident_start(c) || std::isdigit(static_cast<unsigned char>(c)) || c == '$';
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::vector<Token> tokenize(std::string_view sql) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  const std::size_t n = sql.size();

  auto quoted = [&](char close, TokenKind kind) {
    const std::size_t start = i;
    std::string body;
    ++i;
    while (true) {
      if (i >= n) throw ParseError(start, "unterminated quoted token");
      if (sql[i] == close) {
        if (i + 1 < n && sql[i + 1] == close) {
          body += close;
          i += 2;
          continue;
        }
        ++i;
        break;
      }
      body += sql[i++];
    }
    tokens.push_back({kind, std::move(body), start});
  };

  while (i < n) {
    const char c = sql[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '-' && i + 1 < n && sql[i + 1] == '-') {
      while (i < n && sql[i] != '\n') ++i;
    } else if (c == '/' && i + 1 < n && sql[i + 1] == '*') {
      const std::size_t start = i;
      i += 2;
      while (i + 1 < n && !(sql[i] == '*' && sql[i + 1] == '/')) ++i;
      if (i + 1 >= n) throw ParseError(start, "unterminated block comment");
      i += 2;
    } else if (c == '\'') {
      quoted('\'', TokenKind::String);
    } else if (c == '"') {
      quoted('"', TokenKind::QuotedIdent);
    } else if (c == '`') {
      quoted('`', TokenKind::QuotedIdent);
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(sql[i + 1])))) {
      const std::size_t start = i;
      while (i < n && (std::isdigit(static_cast<unsigned char>(sql[i])) || sql[i] == '.')) ++i;
      if (i < n && (sql[i] == 'e' || sql[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < n && (sql[j] == '+' || sql[j] == '-')) ++j;
        if (j < n && std::isdigit(static_cast<unsigned char>(sql[j]))) {
          i = j;
          while (i < n && std::isdigit(static_cast<unsigned char>(sql[i]))) ++i;
        }
      }
      tokens.push_back({TokenKind::Number, std::string(sql.substr(start, i - start)), start});
    } else if (is_ident_start(c)) {
      const std::size_t start = i;
      while (i < n && is_ident_char(sql[i])) ++i;
      tokens.push_back({TokenKind::Ident, lower(sql.substr(start, i - start)), start});
    } else {
      static constexpr std::string_view kTwoChar[] = {"<=", ">=", "<>", "!=", "||", "::", "=="};
      const std::size_t start = i;
      std::string sym(1, c);
      if (i + 1 < n) {
        const std::string_view pair = sql.substr(i, 2);
        for (auto candidate : kTwoChar) {
          if (pair == candidate) sym = std::string(pair);
        }
      }
      static constexpr std::string_view kSingle = "(),.;*+-/%=<>";
      if (sym.size() == 1 && kSingle.find(c) == std::string_view::npos) {
        throw ParseError(start, std::string("unexpected character '") + c + "'");
      }
      i += sym.size();
      tokens.push_back({TokenKind::Symbol, std::move(sym), start});
    }
  }
  tokens.push_back({TokenKind::End, {}, n});
  return tokens;
}

}  // namespace lineage_forge::detail
