#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace lineage_forge::detail {

enum class TokenKind { Ident, QuotedIdent, Number, String, Symbol, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;  // Ident: lowercased; QuotedIdent/String: unescaped body
  std::size_t offset = 0;
};

// Throws ParseError on malformed input.
std::vector<Token> tokenize(std::string_view sql);

}  // namespace lineage_forge::detail
