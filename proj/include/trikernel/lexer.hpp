#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "trikernel/diagnostic.hpp"

namespace trikernel::syntax {

enum class Tok { Ident, Number, Code, Symbol, End };

/// `text` is the canonical ASCII spelling; Unicode aliases are folded here.
struct Token {
  Tok kind = Tok::End;
  std::string text;
  Span span;
};

struct Pragma {
  std::string text; // after the `--@` marker
  Span span;
};

struct LexResult {
  std::vector<Token> tokens; // always ends with Tok::End
  std::vector<Pragma> pragmas;
};

/// Throws Error(E-PARSE) on a stray character or unterminated comment.
LexResult lex(std::string_view text);

} // namespace trikernel::syntax
