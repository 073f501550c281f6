#include "trikernel/lexer.hpp"

#include <array>
#include <cctype>

namespace trikernel::syntax {

namespace {

struct Alias {
  std::string_view utf8;
  std::string_view ascii;
  Tok kind;
};

constexpr std::array<Alias, 11> kAliases{{
    {"\xE2\x86\x92", "->", Tok::Symbol},   // rightwards arrow
    {"\xE2\x87\x92", "=>", Tok::Symbol},   // rightwards double arrow
    {"\xCE\xBB", "fun", Tok::Ident},       // lambda
    {"\xE2\x88\x98", ".", Tok::Symbol},    // ring operator
    {"\xE2\x9F\xA8", "<", Tok::Symbol},    // left angle bracket
    {"\xE2\x9F\xA9", ">", Tok::Symbol},    // right angle bracket
    {"\xC3\x97", "*", Tok::Symbol},        // multiplication sign
    {"\xE2\x88\xA7", "/\\", Tok::Symbol},  // logical and
    {"\xE2\x88\xA8", "\\/", Tok::Symbol},  // logical or
    {"\xC2\xB7", "#", Tok::Symbol},        // middle dot
    {"\xE2\x89\xA4", "<=", Tok::Symbol},   // less-than or equal
}};

// Longest symbols first.
constexpr std::array<std::string_view, 23> kSymbols{
    ":=", "==", "->", "=>", "/\\", "\\/", "<=", "(", ")", "{", "}", "<",
    ">",  "|",  ",",  ":",  "=",  "@",  "^",  "#",  "*", ";",  "."};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

} // namespace

LexResult lex(std::string_view text) {
  LexResult out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    if (text.substr(i, 2) == "--") {
      std::size_t start = i;
      while (i < n && text[i] != '\n')
        ++i;
      if (text.substr(start, 3) == "--@")
        out.pragmas.push_back(Pragma{std::string(text.substr(start + 3, i - start - 3)),
                                     Span{start, i}});
      continue;
    }
    if (text.substr(i, 2) == "{-") {
      std::size_t start = i;
      int depth = 0;
      while (i < n) {
        if (text.substr(i, 2) == "{-") {
          ++depth;
          i += 2;
        } else if (text.substr(i, 2) == "-}") {
          --depth;
          i += 2;
          if (depth == 0)
            break;
        } else {
          ++i;
        }
      }
      if (depth != 0)
        throw Error(Code::Parse, "unterminated block comment", Span{start, start + 2});
      continue;
    }
    // Error codes such as E-2CELL-BOUNDARY, used by fail-check.
    if (text.substr(i, 2) == "E-" && i + 2 < n &&
        std::isalnum(static_cast<unsigned char>(text[i + 2]))) {
      std::size_t start = i;
      i += 2;
      while (i < n && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '-'))
        ++i;
      out.tokens.push_back(Token{Tok::Code, std::string(text.substr(start, i - start)),
                                 Span{start, i}});
      continue;
    }
    if (text.substr(i, 10) == "fail-check") {
      out.tokens.push_back(Token{Tok::Ident, "fail-check", Span{i, i + 10}});
      i += 10;
      continue;
    }
    if (ident_start(c)) {
      std::size_t start = i;
      while (i < n && ident_char(text[i]))
        ++i;
      out.tokens.push_back(
          Token{Tok::Ident, std::string(text.substr(start, i - start)), Span{start, i}});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = i;
      while (i < n && std::isdigit(static_cast<unsigned char>(text[i])))
        ++i;
      if (i < n && ident_start(text[i]))
        throw Error(Code::Parse, "malformed number", Span{start, i + 1});
      out.tokens.push_back(
          Token{Tok::Number, std::string(text.substr(start, i - start)), Span{start, i}});
      continue;
    }
    bool matched = false;
    for (const Alias &a : kAliases) {
      if (text.substr(i, a.utf8.size()) == a.utf8) {
        out.tokens.push_back(Token{a.kind, std::string(a.ascii), Span{i, i + a.utf8.size()}});
        i += a.utf8.size();
        matched = true;
        break;
      }
    }
    if (matched)
      continue;
    for (std::string_view s : kSymbols) {
      if (text.substr(i, s.size()) == s) {
        out.tokens.push_back(Token{Tok::Symbol, std::string(s), Span{i, i + s.size()}});
        i += s.size();
        matched = true;
        break;
      }
    }
    if (matched)
      continue;
    std::size_t len = 1;
    unsigned char u = static_cast<unsigned char>(c);
    if (u >= 0xF0)
      len = 4;
    else if (u >= 0xE0)
      len = 3;
    else if (u >= 0xC0)
      len = 2;
    throw Error(Code::Parse, "unexpected character '" + std::string(text.substr(i, len)) + "'",
                Span{i, std::min(n, i + len)});
  }
  out.tokens.push_back(Token{Tok::End, "", Span{n, n}});
  return out;
}

} // namespace trikernel::syntax
