#include "interp.hpp"

#include "frontend.hpp"

namespace ibmc {

namespace {

struct Env {
  const Program& p;
  ConcreteState st;
  std::map<std::string, uint64_t> locals;  // per-step scratch (incl. inputs)
  std::map<std::string, std::map<uint64_t, uint64_t>> local_arrays;
  std::map<std::string, uint64_t> local_array_default;
  const DrawFn* draws;
  std::vector<int> violations;
  bool blocked = false;

  uint64_t read_scalar(const std::string& name) {
    auto it = locals.find(name);
    if (it != locals.end()) return it->second;
    return st.scalars.at(name);
  }

  uint64_t read_array(const std::string& name, uint64_t idx) {
    if (local_arrays.count(name)) {
      auto& cells = local_arrays[name];
      auto it = cells.find(idx);
      return it != cells.end() ? it->second : local_array_default.at(name);
    }
    auto& cells = st.arrays[name];
    auto it = cells.find(idx);
    return it != cells.end() ? it->second : st.array_default.at(name);
  }

  void write_array(const std::string& name, uint64_t idx, uint64_t v) {
    if (local_arrays.count(name))
      local_arrays[name][idx] = v;
    else
      st.arrays[name][idx] = v;
  }

  uint64_t eval(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::IntLit:
        return bv::trunc(e.value, e.type.width);
      case Expr::Kind::BoolLit:
        return e.value;
      case Expr::Kind::Var:
        return read_scalar(e.name);
      case Expr::Kind::Nondet:
        return bv::trunc((*draws)(e.nondet_site), e.type.width);
      case Expr::Kind::Unary:
        return bv::eval_unop(e.unop, e.kid(0)->type, eval(*e.kid(0)));
      case Expr::Kind::Binary: {
        uint64_t a = eval(*e.kid(0));
        uint64_t b = eval(*e.kid(1));
        return bv::eval_binop(e.binop, e.kid(0)->type, a, b);
      }
      case Expr::Kind::Ternary:
        return eval(*e.kid(0)) ? eval(*e.kid(1)) : eval(*e.kid(2));
      case Expr::Kind::Cast:
        return bv::eval_cast(e.kid(0)->type, e.cast_to, eval(*e.kid(0)));
      case Expr::Kind::Index:
        return read_array(e.name, eval(*e.kid(0)));
    }
    return 0;
  }

  void exec(const Block& b) {
    for (const auto& s : b) {
      if (blocked) return;
      exec_stmt(*s);
    }
  }

  void exec_stmt(const Stmt& s) {
    switch (s.kind) {
      case Stmt::Kind::Assign: {
        if (s.index) {
          write_array(s.name, eval(*s.index), eval(*s.rhs));
        } else {
          uint64_t v = eval(*s.rhs);
          const VarInfo& vi = p.var(s.name);
          if (vi.kind == VarKind::Local)
            locals[s.name] = v;
          else
            st.scalars[s.name] = v;
        }
        break;
      }
      case Stmt::Kind::Local: {
        if (s.decl_type.is_array()) {
          local_arrays[s.name] = {};
          local_array_default[s.name] = eval(*s.rhs);
        } else {
          locals[s.name] = eval(*s.rhs);
        }
        break;
      }
      case Stmt::Kind::If:
        exec(eval(*s.cond) ? s.body : s.else_body);
        break;
      case Stmt::Kind::Assert:
        if (!eval(*s.cond)) violations.push_back(s.assert_id);
        break;
      case Stmt::Kind::Assume:
        if (!eval(*s.cond)) blocked = true;
        break;
      case Stmt::Kind::For: {
        // Normally expanded away; interpreted directly so expansion can be
        // cross-checked against this path.
        uint64_t lo = eval(*s.lo), hi = eval(*s.hi);
        for (uint64_t i = lo; i < hi && !blocked; ++i) {
          locals[s.name] = i;
          exec(s.body);
        }
        locals.erase(s.name);
        break;
      }
    }
  }
};

}  // namespace

Interpreter::Interpreter(const Program& p) : p_(p) {
  assert(p.typed);
}

ExecResult Interpreter::run_init(const DrawFn& draws) const {
  Env env{p_, ConcreteState{}, {}, {}, {}, &draws, {}, false};
  // Declaration order; scalars default to 0 until assigned.
  for (const auto& d : p_.decls) {
    if (d.kind == VarKind::Input) continue;
    if (d.type.is_array()) {
      env.st.array_default[d.name] = env.eval(*d.init);
      env.st.arrays[d.name] = {};
    } else {
      env.st.scalars[d.name] = d.init ? env.eval(*d.init) : 0;
    }
  }
  env.exec(p_.init_block);
  ExecResult r;
  r.violations = std::move(env.violations);
  r.blocked = env.blocked;
  r.state = std::move(env.st);
  return r;
}

ExecResult Interpreter::step(const ConcreteState& s, const Block& body,
                             const std::map<std::string, uint64_t>& inputs,
                             const DrawFn& draws) const {
  Env env{p_, s, {}, {}, {}, &draws, {}, false};
  for (const auto& d : p_.decls) {
    if (d.kind != VarKind::Input) continue;
    auto it = inputs.find(d.name);
    env.locals[d.name] =
        bv::trunc(it != inputs.end() ? it->second : 0, d.type.width);
  }
  env.exec(body);
  ExecResult r;
  r.violations = std::move(env.violations);
  r.blocked = env.blocked;
  r.state = std::move(env.st);
  return r;
}

}  // namespace ibmc
