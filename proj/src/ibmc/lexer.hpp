#pragma once

#include <string>
#include <vector>

#include "diag.hpp"

namespace ibmc {

enum class Tok : uint8_t {
  Ident, Int,
  KwInput, KwState, KwInit, KwLoop, KwIf, KwElse, KwAssert, KwAssume,
  KwFor, KwIn, KwLocal, KwNondet, KwTrue, KwFalse, KwAs, KwBool,
  Assign,      // :=
  Semi, LParen, RParen, LBrace, RBrace, LBracket, RBracket,
  DotDot, Question, Colon,
  Plus, Minus, Star, Slash, Percent,
  Amp, Pipe, Caret, Shl, Shr,
  EqEq, NotEq, Lt, Le, Gt, Ge,
  Bang, Tilde,
  Eof,
};

struct Token {
  Tok kind;
  std::string text;
  uint64_t value = 0;  // Int
  SourceLoc loc;
};

// Tokenizes the whole input; throws ParseError on bad characters or
// malformed literals.
std::vector<Token> lex(const std::string& src);

const char* tok_name(Tok t);

}  // namespace ibmc
