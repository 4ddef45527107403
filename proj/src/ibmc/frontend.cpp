#include "frontend.hpp"

#include <algorithm>
#include <functional>

namespace ibmc {

std::optional<uint64_t> fold_const(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::IntLit:
      return bv::trunc(e.value, e.typed ? e.type.width : 64);
    case Expr::Kind::BoolLit:
      return e.value;
    case Expr::Kind::Unary: {
      auto a = fold_const(*e.kid(0));
      if (!a) return std::nullopt;
      return bv::eval_unop(e.unop, e.kid(0)->type, *a);
    }
    case Expr::Kind::Binary: {
      auto a = fold_const(*e.kid(0));
      auto b = fold_const(*e.kid(1));
      if (!a || !b) return std::nullopt;
      return bv::eval_binop(e.binop, e.kid(0)->type, *a, *b);
    }
    case Expr::Kind::Ternary: {
      auto c = fold_const(*e.kid(0));
      if (!c) return std::nullopt;
      return fold_const(*c ? *e.kid(1) : *e.kid(2));
    }
    case Expr::Kind::Cast: {
      auto a = fold_const(*e.kid(0));
      if (!a) return std::nullopt;
      return bv::eval_cast(e.kid(0)->type, e.cast_to, *a);
    }
    default:
      return std::nullopt;
  }
}

std::set<std::string> modified_vars(const Block& b) {
  std::set<std::string> out;
  std::function<void(const Block&)> walk = [&](const Block& blk) {
    for (const auto& s : blk) {
      switch (s->kind) {
        case Stmt::Kind::Assign:
        case Stmt::Kind::Local:
          out.insert(s->name);
          break;
        case Stmt::Kind::If:
          walk(s->body);
          walk(s->else_body);
          break;
        case Stmt::Kind::For:
          walk(s->body);
          break;
        default:
          break;
      }
    }
  };
  walk(b);
  return out;
}

namespace {

class Checker {
 public:
  explicit Checker(Program& p) : p_(p) {}

  void run() {
    for (auto& d : p_.decls) declare(d);
    for (auto& s : p_.init_block) check_stmt(*s, /*in_init=*/true);
    // Every state variable needs an initializer or an init-block write.
    std::set<std::string> init_writes = modified_vars(p_.init_block);
    for (const auto& d : p_.decls) {
      if (d.kind == VarKind::State && !d.init && !init_writes.count(d.name))
        throw TypeError(d.loc, "state variable '" + d.name +
                                   "' has no initializer and is not "
                                   "assigned in the init block");
    }
    int ordinal = 0;
    for (auto& l : p_.loops) {
      l.id = "main." + std::to_string(ordinal++);
      LoopInfo info;
      info.id = l.id;
      info.bounded = false;
      info.depth = 0;
      p_.loop_table.push_back(info);
      size_t row = p_.loop_table.size() - 1;
      for (auto& s : l.body) check_stmt(*s, false, 1, &ordinal, true);
      p_.loop_table[row].modified_vars = modified_vars(l.body);
    }
    p_.typed = true;
    p_.nondet_sites = nondet_sites_;
  }

 private:
  void declare(Decl& d) {
    if (p_.vars.count(d.name))
      throw TypeError(d.loc, "duplicate declaration of '" + d.name + "'");
    if (d.type.is_array()) {
      if (d.kind == VarKind::Input)
        throw TypeError(d.loc, "input variables cannot be arrays");
      if (!d.init)
        throw TypeError(d.loc, "array '" + d.name +
                                   "' needs a constant initializer");
    }
    if (d.init) {
      if (d.kind == VarKind::Input)
        throw TypeError(d.loc, "input variables cannot have initializers");
      Type want = d.type.is_array() ? d.type.element() : d.type;
      check_expr(*d.init, &want);
      require_same(*d.init, want, d.loc);
      if (d.type.is_array() && !fold_const(*d.init))
        throw TypeError(d.loc,
                        "array initializer must be a constant expression");
    }
    p_.vars[d.name] = VarInfo{d.kind, d.type, d.loc};
  }

  void require_same(const Expr& e, const Type& want, SourceLoc loc) {
    if (!e.type.same_scalar(want))
      throw TypeError(loc, "type mismatch: expected " + want.str() +
                               ", got " + e.type.str());
  }

  void check_stmt(Stmt& s, bool in_init, int depth = 0,
                  int* ordinal = nullptr, bool top_level = true) {
    switch (s.kind) {
      case Stmt::Kind::Assign: {
        auto it = p_.vars.find(s.name);
        if (it == p_.vars.end())
          throw TypeError(s.loc, "undeclared identifier '" + s.name + "'");
        const VarInfo& v = it->second;
        if (v.kind == VarKind::Input)
          throw TypeError(s.loc, "inputs are read-only per step");
        if (s.index) {
          if (!v.type.is_array())
            throw TypeError(s.loc, "'" + s.name + "' is not an array");
          check_index(*s.index);
          Type elem = v.type.element();
          check_expr(*s.rhs, &elem);
          require_same(*s.rhs, elem, s.loc);
        } else {
          if (v.type.is_array())
            throw TypeError(s.loc, "array assignment requires an index");
          check_expr(*s.rhs, &v.type);
          require_same(*s.rhs, v.type, s.loc);
        }
        break;
      }
      case Stmt::Kind::Local: {
        if (!top_level)
          throw TypeError(s.loc,
                          "local declarations must be at the top level of "
                          "a body");
        if (p_.vars.count(s.name))
          throw TypeError(s.loc, "duplicate declaration of '" + s.name + "'");
        if (for_vars_.count(s.name))
          throw TypeError(s.loc, "'" + s.name + "' shadows a loop variable");
        Type want = s.decl_type.is_array() ? s.decl_type.element()
                                           : s.decl_type;
        check_expr(*s.rhs, &want);
        require_same(*s.rhs, want, s.loc);
        if (s.decl_type.is_array() && !fold_const(*s.rhs))
          throw TypeError(s.loc,
                          "array initializer must be a constant expression");
        p_.vars[s.name] = VarInfo{VarKind::Local, s.decl_type, s.loc};
        break;
      }
      case Stmt::Kind::If: {
        Type b = Type::boolean();
        check_expr(*s.cond, &b);
        require_same(*s.cond, b, s.loc);
        for (auto& t : s.body) check_stmt(*t, in_init, depth, ordinal, false);
        for (auto& t : s.else_body)
          check_stmt(*t, in_init, depth, ordinal, false);
        break;
      }
      case Stmt::Kind::Assert:
      case Stmt::Kind::Assume: {
        Type b = Type::boolean();
        check_expr(*s.cond, &b);
        require_same(*s.cond, b, s.loc);
        if (s.kind == Stmt::Kind::Assert) {
          s.assert_id = int(p_.asserts.size());
          p_.asserts.push_back(AssertInfo{s.assert_id, s.loc});
        }
        break;
      }
      case Stmt::Kind::For: {
        if (in_init)
          throw TypeError(s.loc, "for loops are not allowed in init");
        Type u64t = Type::unsigned_(64);
        check_expr(*s.lo, &u64t);
        check_expr(*s.hi, &u64t);
        if (!fold_const(*s.lo) || !fold_const(*s.hi))
          throw TypeError(s.loc, "bound must be static");
        if (p_.vars.count(s.name) || for_vars_.count(s.name))
          throw TypeError(s.loc, "duplicate declaration of '" + s.name + "'");
        if (ordinal) {
          uint64_t lo = *fold_const(*s.lo), hi = *fold_const(*s.hi);
          LoopInfo info;
          info.id = "main." + std::to_string((*ordinal)++);
          info.bounded = true;
          info.bound = hi > lo ? hi - lo : 0;
          info.depth = depth;
          info.modified_vars = modified_vars(s.body);
          p_.loop_table.push_back(info);
        }
        for_vars_.insert(s.name);
        for (auto& t : s.body)
          check_stmt(*t, in_init, depth + 1, ordinal, false);
        for_vars_.erase(s.name);
        break;
      }
    }
  }

  void check_index(Expr& e) {
    Type u64t = Type::unsigned_(64);
    check_expr(e, &u64t);
    if (e.type.is_bool() || e.type.is_array())
      throw TypeError(e.loc, "array index must be an integer");
  }

  // Bottom-up type without mutating; nullopt when the node needs context.
  std::optional<Type> infer(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::IntLit:
      case Expr::Kind::Nondet:
        return std::nullopt;
      case Expr::Kind::BoolLit:
        return Type::boolean();
      case Expr::Kind::Var: {
        if (for_vars_.count(e.name)) return std::nullopt;
        auto it = p_.vars.find(e.name);
        if (it == p_.vars.end()) return std::nullopt;  // reported later
        return it->second.type;
      }
      case Expr::Kind::Unary:
        if (e.unop == UnOp::Not) return Type::boolean();
        return infer(*e.kid(0));
      case Expr::Kind::Binary: {
        if (binop_is_compare(e.binop)) return Type::boolean();
        auto l = infer(*e.kid(0));
        if (l) return l;
        if (e.binop == BinOp::Shl || e.binop == BinOp::Shr)
          return std::nullopt;  // amount type follows the value side
        return infer(*e.kid(1));
      }
      case Expr::Kind::Ternary: {
        auto t = infer(*e.kid(1));
        return t ? t : infer(*e.kid(2));
      }
      case Expr::Kind::Cast:
        return e.cast_to;
      case Expr::Kind::Index: {
        auto it = p_.vars.find(e.name);
        if (it == p_.vars.end()) return std::nullopt;
        return it->second.type.element();
      }
    }
    return std::nullopt;
  }

  void check_expr(Expr& e, const Type* expected) {
    switch (e.kind) {
      case Expr::Kind::IntLit: {
        if (!expected || expected->is_bool() || expected->is_array())
          throw TypeError(e.loc,
                          "cannot infer integer literal type here; add a "
                          "cast like (0 as u8)");
        e.type = *expected;
        break;
      }
      case Expr::Kind::BoolLit:
        e.type = Type::boolean();
        break;
      case Expr::Kind::Nondet: {
        if (!expected || expected->is_array())
          throw TypeError(e.loc, "cannot infer nondet() type here");
        e.type = *expected;
        e.nondet_site = nondet_sites_++;
        break;
      }
      case Expr::Kind::Var: {
        if (for_vars_.count(e.name)) {
          // Loop induction variable: typed like a literal, substituted
          // at expansion.
          if (!expected || expected->is_bool() || expected->is_array())
            throw TypeError(e.loc, "cannot infer type of loop variable '" +
                                       e.name + "' here");
          e.type = *expected;
          break;
        }
        auto it = p_.vars.find(e.name);
        if (it == p_.vars.end())
          throw TypeError(e.loc, "undeclared identifier '" + e.name + "'");
        if (it->second.type.is_array())
          throw TypeError(e.loc, "array '" + e.name +
                                     "' must be indexed");
        e.type = it->second.type;
        break;
      }
      case Expr::Kind::Unary: {
        if (e.unop == UnOp::Not) {
          Type b = Type::boolean();
          check_expr(*e.kid(0), &b);
          if (!e.kid(0)->type.is_bool())
            throw TypeError(e.loc, "'!' needs a bool operand");
          e.type = b;
        } else {
          const Type* want = (expected && !expected->is_bool()) ? expected
                                                                : nullptr;
          check_expr(*e.kid(0), want);
          if (e.kid(0)->type.is_bool())
            throw TypeError(e.loc, std::string("'") + unop_str(e.unop) +
                                       "' needs an integer operand");
          e.type = e.kid(0)->type;
        }
        break;
      }
      case Expr::Kind::Binary: {
        bool cmp = binop_is_compare(e.binop);
        bool boolable = e.binop == BinOp::And || e.binop == BinOp::Or ||
                        e.binop == BinOp::Xor || e.binop == BinOp::Eq ||
                        e.binop == BinOp::Ne;
        std::optional<Type> op_t = infer(*e.kid(0));
        if (!op_t) op_t = infer(*e.kid(1));
        if (!op_t && !cmp && expected && !expected->is_array())
          op_t = *expected;
        if (!op_t)
          throw TypeError(e.loc, "cannot infer operand type of '" +
                                     std::string(binop_str(e.binop)) +
                                     "'; add a cast");
        check_expr(*e.kid(0), &*op_t);
        check_expr(*e.kid(1), &*op_t);
        if (!e.kid(0)->type.same_scalar(e.kid(1)->type))
          throw TypeError(e.loc, "operand type mismatch: " +
                                     e.kid(0)->type.str() + " vs " +
                                     e.kid(1)->type.str());
        if (e.kid(0)->type.is_bool() && !boolable)
          throw TypeError(e.loc, std::string("'") + binop_str(e.binop) +
                                     "' is not defined on bool");
        e.type = cmp ? Type::boolean() : e.kid(0)->type;
        break;
      }
      case Expr::Kind::Ternary: {
        Type b = Type::boolean();
        check_expr(*e.kid(0), &b);
        if (!e.kid(0)->type.is_bool())
          throw TypeError(e.loc, "ternary condition must be bool");
        std::optional<Type> arm = infer(*e.kid(1));
        if (!arm) arm = infer(*e.kid(2));
        if (!arm && expected) arm = *expected;
        if (!arm)
          throw TypeError(e.loc, "cannot infer ternary arm type");
        check_expr(*e.kid(1), &*arm);
        check_expr(*e.kid(2), &*arm);
        if (!e.kid(1)->type.same_scalar(e.kid(2)->type))
          throw TypeError(e.loc, "ternary arms have different types");
        e.type = e.kid(1)->type;
        break;
      }
      case Expr::Kind::Cast: {
        if (e.cast_to.is_array())
          throw TypeError(e.loc, "cannot cast to an array type");
        std::optional<Type> src = infer(*e.kid(0));
        check_expr(*e.kid(0), src ? &*src : &e.cast_to);
        e.type = e.cast_to;
        break;
      }
      case Expr::Kind::Index: {
        auto it = p_.vars.find(e.name);
        if (it == p_.vars.end())
          throw TypeError(e.loc, "undeclared identifier '" + e.name + "'");
        if (!it->second.type.is_array())
          throw TypeError(e.loc, "'" + e.name + "' is not an array");
        check_index(*e.kid(0));
        e.type = it->second.type.element();
        break;
      }
    }
    e.typed = true;
  }

  Program& p_;
  std::set<std::string> for_vars_;
  int nondet_sites_ = 0;
};

void substitute_var(Expr& e, const std::string& name, uint64_t value) {
  if (e.kind == Expr::Kind::Var && e.name == name) {
    e.kind = Expr::Kind::IntLit;
    e.value = bv::trunc(value, e.type.width);
    e.name.clear();
    return;
  }
  for (auto& k : e.kids) substitute_var(*k, name, value);
}

void substitute_block(Block& b, const std::string& name, uint64_t value) {
  for (auto& s : b) {
    if (s->index) substitute_var(*s->index, name, value);
    if (s->rhs) substitute_var(*s->rhs, name, value);
    if (s->cond) substitute_var(*s->cond, name, value);
    if (s->lo) substitute_var(*s->lo, name, value);
    if (s->hi) substitute_var(*s->hi, name, value);
    substitute_block(s->body, name, value);
    substitute_block(s->else_body, name, value);
  }
}

void expand_block(Program& p, Block& b, bool unwinding_assertions) {
  Block out;
  for (auto& s : b) {
    if (s->kind != Stmt::Kind::For) {
      expand_block(p, s->body, unwinding_assertions);
      expand_block(p, s->else_body, unwinding_assertions);
      out.push_back(std::move(s));
      continue;
    }
    auto lo = fold_const(*s->lo);
    auto hi = fold_const(*s->hi);
    if (!lo || !hi) throw TypeError(s->loc, "bound must be static");
    for (uint64_t i = *lo; i < *hi; ++i) {
      Block copy = clone_block(s->body);
      substitute_block(copy, s->name, i);
      expand_block(p, copy, unwinding_assertions);
      for (auto& c : copy) out.push_back(std::move(c));
    }
    if (unwinding_assertions) {
      // Continuation condition after the last copy; statically false for
      // fully unwound bounds, so the assert is unreachable by construction.
      uint64_t next = *hi > *lo ? *hi : *lo;
      auto guard = std::make_unique<Stmt>(Stmt::Kind::If, s->loc);
      auto cl = make_int(next, s->loc);
      cl->type = Type::unsigned_(64);
      cl->typed = true;
      auto ch = make_int(*hi, s->loc);
      ch->type = Type::unsigned_(64);
      ch->typed = true;
      guard->cond = make_binary(BinOp::Lt, std::move(cl), std::move(ch), s->loc);
      guard->cond->type = Type::boolean();
      guard->cond->typed = true;
      auto ua = std::make_unique<Stmt>(Stmt::Kind::Assert, s->loc);
      ua->cond = make_bool(false, s->loc);
      ua->cond->typed = true;
      ua->assert_id = int(p.asserts.size());
      p.asserts.push_back(AssertInfo{ua->assert_id, s->loc});
      guard->body.push_back(std::move(ua));
      out.push_back(std::move(guard));
    }
  }
  b = std::move(out);
}

void renumber_nondet(Program& p) {
  int next = 0;
  std::function<void(Expr&)> walk_e = [&](Expr& e) {
    if (e.kind == Expr::Kind::Nondet) e.nondet_site = next++;
    for (auto& k : e.kids) walk_e(*k);
  };
  std::function<void(Block&)> walk_b = [&](Block& b) {
    for (auto& s : b) {
      if (s->index) walk_e(*s->index);
      if (s->rhs) walk_e(*s->rhs);
      if (s->cond) walk_e(*s->cond);
      walk_b(s->body);
      walk_b(s->else_body);
    }
  };
  for (auto& d : p.decls)
    if (d.init) walk_e(*d.init);
  walk_b(p.init_block);
  for (auto& l : p.loops) walk_b(l.body);
  p.nondet_sites = next;
}

}  // namespace

void typecheck(Program& p) {
  Checker(p).run();
}

const std::vector<LoopInfo>& index_loops(const Program& p) {
  assert(p.typed);
  return p.loop_table;
}

void expand_bounded_loops(Program& p, bool unwinding_assertions) {
  assert(p.typed);
  for (auto& l : p.loops) expand_block(p, l.body, unwinding_assertions);
  renumber_nondet(p);
  for (auto& l : p.loops) {
    for (auto& row : p.loop_table)
      if (row.id == l.id) row.modified_vars = modified_vars(l.body);
  }
}

std::vector<EntryAssert> tail_stable_asserts(const Program& p,
                                             const Block& body) {
  struct GuardRef {
    const Expr* cond;
    bool negated;
  };
  struct Found {
    const Stmt* stmt;
    std::vector<GuardRef> guards;
    std::set<std::string> reads;
  };
  std::vector<Found> found;

  std::function<void(const Expr&, std::set<std::string>&)> reads_of =
      [&](const Expr& e, std::set<std::string>& out) {
        if (e.kind == Expr::Kind::Var || e.kind == Expr::Kind::Index)
          out.insert(e.name);
        if (e.kind == Expr::Kind::Nondet) out.insert("!nondet");
        for (const auto& k : e.kids) reads_of(*k, out);
      };

  std::vector<GuardRef> guard_stack;
  std::function<void(const Block&)> collect = [&](const Block& b) {
    for (const auto& s : b) {
      if (s->kind == Stmt::Kind::Assert) {
        Found f;
        f.stmt = s.get();
        f.guards = guard_stack;
        reads_of(*s->cond, f.reads);
        for (const GuardRef& g : f.guards) reads_of(*g.cond, f.reads);
        found.push_back(std::move(f));
      } else if (s->kind == Stmt::Kind::If) {
        guard_stack.push_back(GuardRef{s->cond.get(), false});
        collect(s->body);
        guard_stack.back().negated = true;
        collect(s->else_body);
        guard_stack.pop_back();
      }
    }
  };
  collect(body);

  // A candidate survives if all reads are state variables and nothing it
  // reads is assigned after the assert anywhere in the body. Position is
  // approximated conservatively: any assignment in the body to a read
  // variable that is not strictly before the assert disqualifies it.
  std::vector<EntryAssert> out;
  for (auto& f : found) {
    bool ok = true;
    for (const auto& r : f.reads) {
      auto it = p.vars.find(r);
      if (it == p.vars.end() || it->second.kind != VarKind::State) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;

    // Scan statements after the assert (flattened order).
    bool seen = false;
    std::function<void(const Block&)> scan = [&](const Block& b) {
      for (const auto& s : b) {
        if (s.get() == f.stmt) {
          seen = true;
          continue;
        }
        if ((s->kind == Stmt::Kind::Assign || s->kind == Stmt::Kind::Local)) {
          if (seen && f.reads.count(s->name)) ok = false;
        }
        scan(s->body);
        scan(s->else_body);
      }
    };
    scan(body);
    if (!ok || !seen) continue;

    EntryAssert ea;
    ea.assert_id = f.stmt->assert_id;
    ea.cond = clone_expr(*f.stmt->cond);
    ExprPtr g;
    for (const GuardRef& gr : f.guards) {
      ExprPtr piece = clone_expr(*gr.cond);
      if (gr.negated) {
        piece = make_unary(UnOp::Not, std::move(piece));
        piece->type = Type::boolean();
        piece->typed = true;
      }
      if (!g) {
        g = std::move(piece);
      } else {
        g = make_binary(BinOp::And, std::move(g), std::move(piece));
        g->type = Type::boolean();
        g->typed = true;
      }
    }
    ea.guard = std::move(g);
    out.push_back(std::move(ea));
  }
  return out;
}

}  // namespace ibmc
