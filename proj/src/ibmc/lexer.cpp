#include "lexer.hpp"

#include <cctype>
#include <map>

namespace ibmc {

namespace {

const std::map<std::string, Tok> kKeywords = {
    {"input", Tok::KwInput},   {"state", Tok::KwState},
    {"init", Tok::KwInit},     {"loop", Tok::KwLoop},
    {"if", Tok::KwIf},         {"else", Tok::KwElse},
    {"assert", Tok::KwAssert}, {"assume", Tok::KwAssume},
    {"for", Tok::KwFor},       {"in", Tok::KwIn},
    {"local", Tok::KwLocal},   {"nondet", Tok::KwNondet},
    {"true", Tok::KwTrue},     {"false", Tok::KwFalse},
    {"as", Tok::KwAs},         {"bool", Tok::KwBool},
};

}  // namespace

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  size_t i = 0;
  int line = 1, col = 1;

  auto loc = [&]() { return SourceLoc{line, col}; };
  auto advance = [&](size_t n) {
    for (size_t j = 0; j < n; ++j) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  auto peek = [&](size_t off = 0) -> char {
    return i + off < src.size() ? src[i + off] : '\0';
  };
  auto push = [&](Tok k, SourceLoc l, std::string text) {
    out.push_back(Token{k, std::move(text), 0, l});
  };

  while (i < src.size()) {
    char c = peek();
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && peek(1) == '/') {
      while (i < src.size() && peek() != '\n') advance(1);
      continue;
    }
    if (c == '/' && peek(1) == '*') {
      SourceLoc start = loc();
      advance(2);
      while (i < src.size() && !(peek() == '*' && peek(1) == '/')) advance(1);
      if (i >= src.size()) throw ParseError(start, "unterminated comment");
      advance(2);
      continue;
    }
    SourceLoc l = loc();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string word;
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') {
        word += peek();
        advance(1);
      }
      auto it = kKeywords.find(word);
      push(it != kKeywords.end() ? it->second : Tok::Ident, l, word);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num;
      uint64_t value = 0;
      if (c == '0' && (peek(1) == 'x' || peek(1) == 'X')) {
        num = "0x";
        advance(2);
        if (!std::isxdigit(static_cast<unsigned char>(peek())))
          throw ParseError(l, "malformed hex literal");
        while (std::isxdigit(static_cast<unsigned char>(peek()))) {
          value = value * 16 +
                  uint64_t(std::stoul(std::string(1, peek()), nullptr, 16));
          num += peek();
          advance(1);
        }
      } else {
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
          uint64_t d = uint64_t(peek() - '0');
          if (value > (~uint64_t(0) - d) / 10)
            throw ParseError(l, "integer literal does not fit in 64 bits");
          value = value * 10 + d;
          num += peek();
          advance(1);
        }
      }
      Token t{Tok::Int, num, value, l};
      out.push_back(t);
      continue;
    }
    auto two = [&](char a, char b) { return c == a && peek(1) == b; };
    if (two(':', '=')) { push(Tok::Assign, l, ":="); advance(2); continue; }
    if (two('.', '.')) { push(Tok::DotDot, l, ".."); advance(2); continue; }
    if (two('<', '<')) { push(Tok::Shl, l, "<<"); advance(2); continue; }
    if (two('>', '>')) { push(Tok::Shr, l, ">>"); advance(2); continue; }
    if (two('=', '=')) { push(Tok::EqEq, l, "=="); advance(2); continue; }
    if (two('!', '=')) { push(Tok::NotEq, l, "!="); advance(2); continue; }
    if (two('<', '=')) { push(Tok::Le, l, "<="); advance(2); continue; }
    if (two('>', '=')) { push(Tok::Ge, l, ">="); advance(2); continue; }
    Tok k;
    switch (c) {
      case ';': k = Tok::Semi; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case '{': k = Tok::LBrace; break;
      case '}': k = Tok::RBrace; break;
      case '[': k = Tok::LBracket; break;
      case ']': k = Tok::RBracket; break;
      case '?': k = Tok::Question; break;
      case ':': k = Tok::Colon; break;
      case '+': k = Tok::Plus; break;
      case '-': k = Tok::Minus; break;
      case '*': k = Tok::Star; break;
      case '/': k = Tok::Slash; break;
      case '%': k = Tok::Percent; break;
      case '&': k = Tok::Amp; break;
      case '|': k = Tok::Pipe; break;
      case '^': k = Tok::Caret; break;
      case '<': k = Tok::Lt; break;
      case '>': k = Tok::Gt; break;
      case '!': k = Tok::Bang; break;
      case '~': k = Tok::Tilde; break;
      default:
        throw ParseError(l, std::string("unexpected character '") + c + "'");
    }
    push(k, l, std::string(1, c));
    advance(1);
  }
  out.push_back(Token{Tok::Eof, "<eof>", 0, loc()});
  return out;
}

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Int: return "integer";
    case Tok::KwInput: return "'input'";
    case Tok::KwState: return "'state'";
    case Tok::KwInit: return "'init'";
    case Tok::KwLoop: return "'loop'";
    case Tok::KwIf: return "'if'";
    case Tok::KwElse: return "'else'";
    case Tok::KwAssert: return "'assert'";
    case Tok::KwAssume: return "'assume'";
    case Tok::KwFor: return "'for'";
    case Tok::KwIn: return "'in'";
    case Tok::KwLocal: return "'local'";
    case Tok::KwNondet: return "'nondet'";
    case Tok::KwTrue: return "'true'";
    case Tok::KwFalse: return "'false'";
    case Tok::KwAs: return "'as'";
    case Tok::KwBool: return "'bool'";
    case Tok::Assign: return "':='";
    case Tok::Semi: return "';'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::DotDot: return "'..'";
    case Tok::Question: return "'?'";
    case Tok::Colon: return "':'";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Percent: return "'%'";
    case Tok::Amp: return "'&'";
    case Tok::Pipe: return "'|'";
    case Tok::Caret: return "'^'";
    case Tok::Shl: return "'<<'";
    case Tok::Shr: return "'>>'";
    case Tok::EqEq: return "'=='";
    case Tok::NotEq: return "'!='";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Gt: return "'>'";
    case Tok::Ge: return "'>='";
    case Tok::Bang: return "'!'";
    case Tok::Tilde: return "'~'";
    case Tok::Eof: return "end of input";
  }
  return "?";
}

}  // namespace ibmc
