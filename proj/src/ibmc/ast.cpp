#include "ast.hpp"

#include <sstream>

namespace ibmc {

ExprPtr make_int(uint64_t v, SourceLoc loc) {
  auto e = std::make_unique<Expr>(Expr::Kind::IntLit, loc);
  e->value = v;
  return e;
}

ExprPtr make_bool(bool v, SourceLoc loc) {
  auto e = std::make_unique<Expr>(Expr::Kind::BoolLit, loc);
  e->value = v ? 1 : 0;
  e->type = Type::boolean();
  return e;
}

ExprPtr make_var(const std::string& name, SourceLoc loc) {
  auto e = std::make_unique<Expr>(Expr::Kind::Var, loc);
  e->name = name;
  return e;
}

ExprPtr make_unary(UnOp op, ExprPtr a, SourceLoc loc) {
  auto e = std::make_unique<Expr>(Expr::Kind::Unary, loc);
  e->unop = op;
  e->kids.push_back(std::move(a));
  return e;
}

ExprPtr make_binary(BinOp op, ExprPtr a, ExprPtr b, SourceLoc loc) {
  auto e = std::make_unique<Expr>(Expr::Kind::Binary, loc);
  e->binop = op;
  e->kids.push_back(std::move(a));
  e->kids.push_back(std::move(b));
  return e;
}

ExprPtr clone_expr(const Expr& e) {
  auto c = std::make_unique<Expr>(e.kind, e.loc);
  c->type = e.type;
  c->typed = e.typed;
  c->value = e.value;
  c->name = e.name;
  c->unop = e.unop;
  c->binop = e.binop;
  c->cast_to = e.cast_to;
  c->nondet_site = e.nondet_site;
  for (const auto& k : e.kids) c->kids.push_back(clone_expr(*k));
  return c;
}

StmtPtr clone_stmt(const Stmt& s) {
  auto c = std::make_unique<Stmt>(s.kind, s.loc);
  c->name = s.name;
  if (s.index) c->index = clone_expr(*s.index);
  if (s.rhs) c->rhs = clone_expr(*s.rhs);
  if (s.cond) c->cond = clone_expr(*s.cond);
  if (s.lo) c->lo = clone_expr(*s.lo);
  if (s.hi) c->hi = clone_expr(*s.hi);
  c->body = clone_block(s.body);
  c->else_body = clone_block(s.else_body);
  c->decl_type = s.decl_type;
  c->assert_id = s.assert_id;
  return c;
}

Block clone_block(const Block& b) {
  Block out;
  out.reserve(b.size());
  for (const auto& s : b) out.push_back(clone_stmt(*s));
  return out;
}

namespace {

void print_expr_rec(std::ostream& os, const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::IntLit:
      // Raw bit pattern; the reparse adopts the same type in the same
      // context, so the value round-trips exactly.
      os << (e.typed ? bv::trunc(e.value, e.type.width) : e.value);
      break;
    case Expr::Kind::BoolLit:
      os << (e.value ? "true" : "false");
      break;
    case Expr::Kind::Var:
      os << e.name;
      break;
    case Expr::Kind::Nondet:
      os << "nondet()";
      break;
    case Expr::Kind::Unary:
      os << unop_str(e.unop);
      os << "(";
      print_expr_rec(os, *e.kid(0));
      os << ")";
      break;
    case Expr::Kind::Binary:
      os << "(";
      print_expr_rec(os, *e.kid(0));
      os << " " << binop_str(e.binop) << " ";
      print_expr_rec(os, *e.kid(1));
      os << ")";
      break;
    case Expr::Kind::Ternary:
      os << "(";
      print_expr_rec(os, *e.kid(0));
      os << " ? ";
      print_expr_rec(os, *e.kid(1));
      os << " : ";
      print_expr_rec(os, *e.kid(2));
      os << ")";
      break;
    case Expr::Kind::Cast:
      os << "(";
      print_expr_rec(os, *e.kid(0));
      os << " as " << e.cast_to.str() << ")";
      break;
    case Expr::Kind::Index:
      os << e.name << "[";
      print_expr_rec(os, *e.kid(0));
      os << "]";
      break;
  }
}

void print_block(std::ostream& os, const Block& b, int indent);

void print_stmt(std::ostream& os, const Stmt& s, int indent) {
  std::string pad(size_t(indent) * 2, ' ');
  os << pad;
  switch (s.kind) {
    case Stmt::Kind::Assign:
      os << s.name;
      if (s.index) {
        os << "[";
        print_expr_rec(os, *s.index);
        os << "]";
      }
      os << " := ";
      print_expr_rec(os, *s.rhs);
      os << ";\n";
      break;
    case Stmt::Kind::If:
      os << "if (";
      print_expr_rec(os, *s.cond);
      os << ") {\n";
      print_block(os, s.body, indent + 1);
      os << pad << "}";
      if (!s.else_body.empty()) {
        os << " else {\n";
        print_block(os, s.else_body, indent + 1);
        os << pad << "}";
      }
      os << "\n";
      break;
    case Stmt::Kind::Assert:
      os << "assert(";
      print_expr_rec(os, *s.cond);
      os << ");\n";
      break;
    case Stmt::Kind::Assume:
      os << "assume(";
      print_expr_rec(os, *s.cond);
      os << ");\n";
      break;
    case Stmt::Kind::For:
      os << "for " << s.name << " in ";
      print_expr_rec(os, *s.lo);
      os << " .. ";
      print_expr_rec(os, *s.hi);
      os << " {\n";
      print_block(os, s.body, indent + 1);
      os << pad << "}\n";
      break;
    case Stmt::Kind::Local:
      os << "local " << s.decl_type.str() << " " << s.name << " := ";
      print_expr_rec(os, *s.rhs);
      os << ";\n";
      break;
  }
}

void print_block(std::ostream& os, const Block& b, int indent) {
  for (const auto& s : b) print_stmt(os, *s, indent);
}

}  // namespace

std::string print_expr(const Expr& e) {
  std::ostringstream os;
  print_expr_rec(os, e);
  return os.str();
}

std::string print_program(const Program& p) {
  std::ostringstream os;
  for (const auto& d : p.decls) {
    os << (d.kind == VarKind::Input ? "input " : "state ") << d.type.str()
       << " " << d.name;
    if (d.init) {
      os << " := ";
      print_expr_rec(os, *d.init);
    }
    os << ";\n";
  }
  if (!p.init_block.empty()) {
    os << "init {\n";
    print_block(os, p.init_block, 1);
    os << "}\n";
  }
  for (const auto& l : p.loops) {
    os << "loop " << l.src_name << " {\n";
    print_block(os, l.body, 1);
    os << "}\n";
  }
  return os.str();
}

}  // namespace ibmc
