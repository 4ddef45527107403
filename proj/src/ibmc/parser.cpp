#include "parser.hpp"

#include "lexer.hpp"

namespace ibmc {

namespace {

class Parser {
 public:
  explicit Parser(const SourceProgram& src)
      : toks_(lex(src.text)), origin_(src.origin) {}

  Program run() {
    Program p;
    p.origin = origin_;
    while (at(Tok::KwInput) || at(Tok::KwState)) p.decls.push_back(decl());
    if (accept(Tok::KwInit)) p.init_block = block();
    if (!at(Tok::KwLoop)) expected("'loop'");
    while (at(Tok::KwLoop)) {
      LoopDef l;
      l.loc = cur().loc;
      eat(Tok::KwLoop);
      l.src_name = eat(Tok::Ident).text;
      l.body = block();
      p.loops.push_back(std::move(l));
    }
    eat(Tok::Eof);
    return p;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  bool at(Tok k) const { return cur().kind == k; }
  bool accept(Tok k) {
    if (!at(k)) return false;
    ++pos_;
    return true;
  }
  Token eat(Tok k) {
    if (!at(k))
      throw ParseError(cur().loc, std::string("expected ") + tok_name(k) +
                                      " but got " + tok_name(cur().kind));
    return toks_[pos_++];
  }
  [[noreturn]] void expected(const std::string& what) {
    throw ParseError(cur().loc,
                     "expected " + what + " but got " + tok_name(cur().kind));
  }

  Type scalar_type() {
    if (accept(Tok::KwBool)) return Type::boolean();
    if (!at(Tok::Ident)) expected("a type (bool, uN, iN)");
    Token t = eat(Tok::Ident);
    const std::string& s = t.text;
    if (s.size() >= 2 && (s[0] == 'u' || s[0] == 'i')) {
      bool digits = true;
      for (size_t i = 1; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) digits = false;
      if (digits) {
        unsigned w = unsigned(std::stoul(s.substr(1)));
        if (w < 1 || w > 64)
          throw ParseError(t.loc, "type width must be in 1..64");
        return s[0] == 'u' ? Type::unsigned_(w) : Type::signed_(w);
      }
    }
    throw ParseError(t.loc, "unknown type '" + s + "'");
  }

  Type type() {
    Type t = scalar_type();
    if (accept(Tok::LBracket)) {
      Token n = eat(Tok::Int);
      if (n.value == 0) throw ParseError(n.loc, "array size must be positive");
      if (n.value > (1u << 20))
        throw ParseError(n.loc, "array size too large");
      t.array_size = unsigned(n.value);
      eat(Tok::RBracket);
    }
    return t;
  }

  Decl decl() {
    Decl d;
    d.loc = cur().loc;
    d.kind = accept(Tok::KwInput) ? VarKind::Input
                                  : (eat(Tok::KwState), VarKind::State);
    d.type = type();
    d.name = eat(Tok::Ident).text;
    if (accept(Tok::Assign)) d.init = expr();
    eat(Tok::Semi);
    return d;
  }

  Block block() {
    eat(Tok::LBrace);
    Block b;
    while (!at(Tok::RBrace)) {
      if (at(Tok::Eof)) expected("'}'");
      b.push_back(stmt());
    }
    eat(Tok::RBrace);
    return b;
  }

  StmtPtr stmt() {
    SourceLoc loc = cur().loc;
    if (accept(Tok::KwIf)) {
      auto s = std::make_unique<Stmt>(Stmt::Kind::If, loc);
      eat(Tok::LParen);
      s->cond = expr();
      eat(Tok::RParen);
      s->body = block();
      if (accept(Tok::KwElse)) {
        if (at(Tok::KwIf)) {
          // else-if chains nest as a single-statement else block
          s->else_body.push_back(stmt());
        } else {
          s->else_body = block();
        }
      }
      return s;
    }
    if (accept(Tok::KwAssert)) {
      auto s = std::make_unique<Stmt>(Stmt::Kind::Assert, loc);
      eat(Tok::LParen);
      s->cond = expr();
      eat(Tok::RParen);
      eat(Tok::Semi);
      return s;
    }
    if (accept(Tok::KwAssume)) {
      auto s = std::make_unique<Stmt>(Stmt::Kind::Assume, loc);
      eat(Tok::LParen);
      s->cond = expr();
      eat(Tok::RParen);
      eat(Tok::Semi);
      return s;
    }
    if (accept(Tok::KwFor)) {
      auto s = std::make_unique<Stmt>(Stmt::Kind::For, loc);
      s->name = eat(Tok::Ident).text;
      eat(Tok::KwIn);
      s->lo = expr();
      eat(Tok::DotDot);
      s->hi = expr();
      s->body = block();
      return s;
    }
    if (accept(Tok::KwLocal)) {
      auto s = std::make_unique<Stmt>(Stmt::Kind::Local, loc);
      s->decl_type = type();
      s->name = eat(Tok::Ident).text;
      eat(Tok::Assign);
      s->rhs = expr();
      eat(Tok::Semi);
      return s;
    }
    if (at(Tok::Ident)) {
      auto s = std::make_unique<Stmt>(Stmt::Kind::Assign, loc);
      s->name = eat(Tok::Ident).text;
      if (accept(Tok::LBracket)) {
        s->index = expr();
        eat(Tok::RBracket);
      }
      eat(Tok::Assign);
      s->rhs = expr();
      eat(Tok::Semi);
      return s;
    }
    expected("a statement");
  }

  ExprPtr expr() { return ternary(); }

  ExprPtr ternary() {
    ExprPtr c = bin_or();
    if (!accept(Tok::Question)) return c;
    auto e = std::make_unique<Expr>(Expr::Kind::Ternary, c->loc);
    e->kids.push_back(std::move(c));
    e->kids.push_back(ternary());
    eat(Tok::Colon);
    e->kids.push_back(ternary());
    return e;
  }

  ExprPtr bin_or() {
    ExprPtr l = bin_xor();
    while (at(Tok::Pipe)) {
      SourceLoc loc = eat(Tok::Pipe).loc;
      l = make_binary(BinOp::Or, std::move(l), bin_xor(), loc);
    }
    return l;
  }
  ExprPtr bin_xor() {
    ExprPtr l = bin_and();
    while (at(Tok::Caret)) {
      SourceLoc loc = eat(Tok::Caret).loc;
      l = make_binary(BinOp::Xor, std::move(l), bin_and(), loc);
    }
    return l;
  }
  ExprPtr bin_and() {
    ExprPtr l = equality();
    while (at(Tok::Amp)) {
      SourceLoc loc = eat(Tok::Amp).loc;
      l = make_binary(BinOp::And, std::move(l), equality(), loc);
    }
    return l;
  }
  ExprPtr equality() {
    ExprPtr l = relational();
    while (at(Tok::EqEq) || at(Tok::NotEq)) {
      BinOp op = at(Tok::EqEq) ? BinOp::Eq : BinOp::Ne;
      SourceLoc loc = cur().loc;
      ++pos_;
      l = make_binary(op, std::move(l), relational(), loc);
    }
    return l;
  }
  ExprPtr relational() {
    ExprPtr l = shift();
    while (at(Tok::Lt) || at(Tok::Le) || at(Tok::Gt) || at(Tok::Ge)) {
      BinOp op = at(Tok::Lt)   ? BinOp::Lt
                 : at(Tok::Le) ? BinOp::Le
                 : at(Tok::Gt) ? BinOp::Gt
                               : BinOp::Ge;
      SourceLoc loc = cur().loc;
      ++pos_;
      l = make_binary(op, std::move(l), shift(), loc);
    }
    return l;
  }
  ExprPtr shift() {
    ExprPtr l = additive();
    while (at(Tok::Shl) || at(Tok::Shr)) {
      BinOp op = at(Tok::Shl) ? BinOp::Shl : BinOp::Shr;
      SourceLoc loc = cur().loc;
      ++pos_;
      l = make_binary(op, std::move(l), additive(), loc);
    }
    return l;
  }
  ExprPtr additive() {
    ExprPtr l = multiplicative();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      BinOp op = at(Tok::Plus) ? BinOp::Add : BinOp::Sub;
      SourceLoc loc = cur().loc;
      ++pos_;
      l = make_binary(op, std::move(l), multiplicative(), loc);
    }
    return l;
  }
  ExprPtr multiplicative() {
    ExprPtr l = unary();
    while (at(Tok::Star) || at(Tok::Slash) || at(Tok::Percent)) {
      BinOp op = at(Tok::Star)    ? BinOp::Mul
                 : at(Tok::Slash) ? BinOp::Div
                                  : BinOp::Rem;
      SourceLoc loc = cur().loc;
      ++pos_;
      l = make_binary(op, std::move(l), unary(), loc);
    }
    return l;
  }
  ExprPtr unary() {
    SourceLoc loc = cur().loc;
    if (accept(Tok::Minus)) return make_unary(UnOp::Neg, unary(), loc);
    if (accept(Tok::Bang)) return make_unary(UnOp::Not, unary(), loc);
    if (accept(Tok::Tilde)) return make_unary(UnOp::BitNot, unary(), loc);
    return postfix();
  }
  ExprPtr postfix() {
    ExprPtr e = primary();
    for (;;) {
      if (at(Tok::KwAs)) {
        SourceLoc loc = eat(Tok::KwAs).loc;
        auto c = std::make_unique<Expr>(Expr::Kind::Cast, loc);
        c->cast_to = scalar_type();
        c->kids.push_back(std::move(e));
        e = std::move(c);
      } else if (at(Tok::LBracket) && e->kind == Expr::Kind::Var) {
        SourceLoc loc = eat(Tok::LBracket).loc;
        auto ix = std::make_unique<Expr>(Expr::Kind::Index, loc);
        ix->name = e->name;
        ix->kids.push_back(expr());
        eat(Tok::RBracket);
        e = std::move(ix);
      } else {
        return e;
      }
    }
  }
  ExprPtr primary() {
    SourceLoc loc = cur().loc;
    if (at(Tok::Int)) {
      Token t = eat(Tok::Int);
      return make_int(t.value, loc);
    }
    if (accept(Tok::KwTrue)) return make_bool(true, loc);
    if (accept(Tok::KwFalse)) return make_bool(false, loc);
    if (accept(Tok::KwNondet)) {
      eat(Tok::LParen);
      eat(Tok::RParen);
      return std::make_unique<Expr>(Expr::Kind::Nondet, loc);
    }
    if (at(Tok::Ident)) {
      Token t = eat(Tok::Ident);
      return make_var(t.text, loc);
    }
    if (accept(Tok::LParen)) {
      ExprPtr e = expr();
      eat(Tok::RParen);
      return e;
    }
    expected("an expression");
  }

  std::vector<Token> toks_;
  std::string origin_;
  size_t pos_ = 0;
};

}  // namespace

Program parse(const SourceProgram& src) {
  if (src.text.empty())
    throw ParseError(SourceLoc{1, 1}, "empty program");
  return Parser(src).run();
}

}  // namespace ibmc
