#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "diag.hpp"
#include "types.hpp"

namespace ibmc {

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
  enum class Kind : uint8_t {
    IntLit, BoolLit, Var, Nondet, Unary, Binary, Ternary, Cast, Index
  };
  Kind kind;
  SourceLoc loc;

  // Filled in by the typechecker.
  Type type;
  bool typed = false;

  uint64_t value = 0;    // IntLit (raw), BoolLit (0/1)
  std::string name;      // Var; Index: the array name
  UnOp unop = UnOp::Neg;
  BinOp binop = BinOp::Add;
  Type cast_to;          // Cast target
  int nondet_site = -1;  // stable id per syntactic nondet() occurrence

  std::vector<ExprPtr> kids;

  Expr(Kind k, SourceLoc l) : kind(k), loc(l) {}

  Expr* kid(size_t i) const { return kids[i].get(); }
};

ExprPtr make_int(uint64_t v, SourceLoc loc = {});
ExprPtr make_bool(bool v, SourceLoc loc = {});
ExprPtr make_var(const std::string& name, SourceLoc loc = {});
ExprPtr make_unary(UnOp op, ExprPtr a, SourceLoc loc = {});
ExprPtr make_binary(BinOp op, ExprPtr a, ExprPtr b, SourceLoc loc = {});
ExprPtr clone_expr(const Expr& e);

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;
using Block = std::vector<StmtPtr>;

struct Stmt {
  enum class Kind : uint8_t { Assign, If, Assert, Assume, For, Local };
  Kind kind;
  SourceLoc loc;

  std::string name;       // Assign/Local target; For induction variable
  ExprPtr index;          // Assign: optional array index
  ExprPtr rhs;            // Assign/Local
  ExprPtr cond;           // If/Assert/Assume
  ExprPtr lo, hi;         // For bounds
  Block body;             // If-then / For body
  Block else_body;        // If-else
  Type decl_type;         // Local
  int assert_id = -1;     // source-order ordinal, set by the typechecker

  Stmt(Kind k, SourceLoc l) : kind(k), loc(l) {}
};

StmtPtr clone_stmt(const Stmt& s);
Block clone_block(const Block& b);

enum class VarKind : uint8_t { Input, State, Local };

struct Decl {
  VarKind kind;
  Type type;
  std::string name;
  ExprPtr init;  // may be null for scalar state initialized in init block
  SourceLoc loc;
};

struct LoopDef {
  std::string src_name;  // the name written in source ("loop <name> { ... }")
  std::string id;        // "main.<ordinal>", set by the typechecker
  Block body;
  SourceLoc loc;
};

struct VarInfo {
  VarKind kind;
  Type type;
  SourceLoc loc;
};

// Loop table row. Bounded rows describe `for` loops (which are gone after
// expand_bounded_loops); unbounded rows are the top-level loop definitions.
struct LoopInfo {
  std::string id;
  bool bounded = false;
  uint64_t bound = 0;  // iteration count for bounded loops
  int depth = 0;       // nesting depth; top-level loops are 0
  std::set<std::string> modified_vars;
};

struct AssertInfo {
  int id;  // ordinal
  SourceLoc loc;
};

struct Program {
  std::string origin;
  std::vector<Decl> decls;
  Block init_block;
  std::vector<LoopDef> loops;

  // Populated by the typechecker.
  bool typed = false;
  std::map<std::string, VarInfo> vars;
  std::vector<LoopInfo> loop_table;
  std::vector<AssertInfo> asserts;
  int nondet_sites = 0;

  const VarInfo& var(const std::string& name) const { return vars.at(name); }
  const LoopDef* find_loop(const std::string& id) const {
    for (const auto& l : loops)
      if (l.id == id) return &l;
    return nullptr;
  }
};

std::string print_program(const Program& p);
std::string print_expr(const Expr& e);

}  // namespace ibmc
