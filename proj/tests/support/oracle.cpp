#include "oracle.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "ibmc/frontend.hpp"
#include "ibmc/parser.hpp"

namespace ibmc::test {

Program compile(const std::string& source, bool unwinding_assertions) {
  Program p = parse(SourceProgram{source, "<test>"});
  typecheck(p);
  expand_bounded_loops(p, unwinding_assertions);
  return p;
}

namespace {

void collect_nondet_expr(const Expr& e, std::map<int, Type>& out) {
  if (e.kind == Expr::Kind::Nondet) out[e.nondet_site] = e.type;
  for (const auto& k : e.kids) collect_nondet_expr(*k, out);
}

void collect_nondet_block(const Block& b, std::map<int, Type>& out) {
  for (const auto& s : b) {
    if (s->index) collect_nondet_expr(*s->index, out);
    if (s->rhs) collect_nondet_expr(*s->rhs, out);
    if (s->cond) collect_nondet_expr(*s->cond, out);
    collect_nondet_block(s->body, out);
    collect_nondet_block(s->else_body, out);
  }
}

// Iterates all valuations of the given (site -> width) choice space.
struct ChoiceSpace {
  std::vector<std::pair<int, unsigned>> dims;  // id, width
  uint64_t total = 1;

  explicit ChoiceSpace(const std::map<int, Type>& sites) {
    for (const auto& [site, t] : sites) {
      dims.emplace_back(site, t.width);
      total *= uint64_t(1) << std::min(t.width, 20u);
    }
  }
  std::map<int, uint64_t> valuation(uint64_t ix) const {
    std::map<int, uint64_t> out;
    for (const auto& [id, w] : dims) {
      uint64_t dom = uint64_t(1) << w;
      out[id] = ix % dom;
      ix /= dom;
    }
    return out;
  }
};

struct InputSpace {
  std::vector<std::pair<std::string, unsigned>> dims;
  uint64_t total = 1;

  explicit InputSpace(const Program& p) {
    for (const auto& d : p.decls)
      if (d.kind == VarKind::Input) {
        dims.emplace_back(d.name, d.type.width);
        total *= uint64_t(1) << std::min(d.type.width, 20u);
      }
  }
  std::map<std::string, uint64_t> valuation(uint64_t ix) const {
    std::map<std::string, uint64_t> out;
    for (const auto& [name, w] : dims) {
      uint64_t dom = uint64_t(1) << w;
      out[name] = ix % dom;
      ix /= dom;
    }
    return out;
  }
};

DrawFn draws_of(const std::map<int, uint64_t>& m) {
  return [m](int site) {
    auto it = m.find(site);
    return it == m.end() ? 0 : it->second;
  };
}

struct Blowup : std::runtime_error {
  Blowup() : std::runtime_error("oracle state space too large") {}
};

}  // namespace

bool oracle_feasible(const Program& p, int kmax, size_t state_cap) {
  (void)kmax;
  (void)state_cap;
  InputSpace inputs(p);
  std::map<int, Type> body_sites;
  for (const auto& l : p.loops) collect_nondet_block(l.body, body_sites);
  ChoiceSpace body(body_sites);
  std::map<int, Type> init_sites;
  for (const auto& d : p.decls)
    if (d.init) collect_nondet_expr(*d.init, init_sites);
  collect_nondet_block(p.init_block, init_sites);
  ChoiceSpace init(init_sites);
  return inputs.total * body.total <= 4096 && init.total <= 4096;
}

OracleOutcome bfs_check(const Program& p, int kmax, size_t state_cap) {
  Interpreter interp(p);
  InputSpace inputs(p);

  std::map<int, Type> init_sites;
  for (const auto& d : p.decls)
    if (d.init) collect_nondet_expr(*d.init, init_sites);
  collect_nondet_block(p.init_block, init_sites);
  ChoiceSpace init_space(init_sites);

  // Re-expansion pruning keeps the minimal violation depth (a pruned
  // occurrence always has an earlier twin) but loses exact layer sets, so
  // it is only used for single-loop programs; multi-loop boundaries must
  // be the states after exactly kmax+1 executions of the previous loop.
  bool prune = p.loops.size() == 1;

  std::set<ConcreteState> layer;
  for (uint64_t ix = 0; ix < init_space.total; ++ix) {
    ExecResult r = interp.run_init(draws_of(init_space.valuation(ix)));
    if (!r.violations.empty()) return OracleOutcome{true, 0};
    if (r.blocked) continue;
    layer.insert(r.state);
    if (layer.size() > state_cap) throw Blowup();
  }

  int global = 0;
  for (const auto& loop : p.loops) {
    std::map<int, Type> body_sites;
    collect_nondet_block(loop.body, body_sites);
    ChoiceSpace body_space(body_sites);
    std::set<ConcreteState> visited = layer;
    for (int t = 0; t <= kmax; ++t) {
      std::set<ConcreteState> next;
      for (const ConcreteState& s : layer) {
        for (uint64_t iix = 0; iix < inputs.total; ++iix) {
          auto in = inputs.valuation(iix);
          for (uint64_t dix = 0; dix < body_space.total; ++dix) {
            ExecResult r = interp.step(s, loop.body, in,
                                       draws_of(body_space.valuation(dix)));
            if (!r.violations.empty())
              return OracleOutcome{true, global};
            if (r.blocked) continue;
            if (prune) {
              if (visited.count(r.state)) continue;
              visited.insert(r.state);
              if (visited.size() > state_cap) throw Blowup();
            }
            next.insert(r.state);
            if (next.size() > state_cap) throw Blowup();
          }
        }
      }
      layer = std::move(next);
      ++global;
      if (layer.empty()) break;
    }
    if (layer.empty()) break;
  }
  return OracleOutcome{false, kmax};
}

std::optional<int> bfs_refutes(const Program& p, int max_depth,
                               size_t state_cap) {
  OracleOutcome r = bfs_check(p, max_depth, state_cap);
  if (r.cex) return r.depth;
  return std::nullopt;
}

bool dpll_sat(const std::vector<std::vector<int>>& clauses, int nvars) {
  std::vector<int> assign(size_t(nvars) + 1, 0);  // 0 unknown, 1 true, -1 false

  std::function<bool()> solve = [&]() -> bool {
    // Unit propagation to fixpoint.
    std::vector<int> trail;
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& cl : clauses) {
        int unassigned = 0, last = 0;
        bool sat = false;
        for (int lit : cl) {
          int v = std::abs(lit);
          int val = assign[size_t(v)];
          if (val == 0) {
            ++unassigned;
            last = lit;
          } else if ((val > 0) == (lit > 0)) {
            sat = true;
            break;
          }
        }
        if (sat) continue;
        if (unassigned == 0) {
          for (int v : trail) assign[size_t(v)] = 0;
          return false;
        }
        if (unassigned == 1) {
          assign[size_t(std::abs(last))] = last > 0 ? 1 : -1;
          trail.push_back(std::abs(last));
          changed = true;
        }
      }
    }
    int branch = 0;
    for (int v = 1; v <= nvars; ++v)
      if (assign[size_t(v)] == 0) {
        branch = v;
        break;
      }
    if (branch == 0) return true;
    for (int val : {1, -1}) {
      assign[size_t(branch)] = val;
      if (solve()) return true;
    }
    assign[size_t(branch)] = 0;
    for (int v : trail) assign[size_t(v)] = 0;
    return false;
  };
  return solve();
}

EvalOutcome eval_equations(const UnwindingSession& sess, int depth,
                           const std::map<uint64_t, uint64_t>& sources) {
  std::map<uint64_t, uint64_t> val;
  struct ArrVal {
    std::map<uint64_t, uint64_t> cells;
    uint64_t dflt = 0;
  };
  std::map<uint64_t, ArrVal> arrays;

  auto name_val = [&](const SsaName& n) -> uint64_t {
    auto it = val.find(n.key());
    if (it != val.end()) return it->second;
    auto s = sources.find(n.key());
    return s != sources.end() ? s->second : 0;
  };
  auto array_val = [&](const SsaName& n) -> ArrVal {
    auto it = arrays.find(n.key());
    if (it != arrays.end()) return it->second;
    ArrVal a;
    if (auto c = sess.array_contents(n)) a.dflt = *c;
    return a;
  };

  std::function<uint64_t(SRef)> ev = [&](SRef r) -> uint64_t {
    const SNode& n = sess.node(r);
    switch (n.kind) {
      case SNode::Kind::Const:
        return n.value;
      case SNode::Kind::Name:
        return bv::trunc(name_val(n.name), n.type.width);
      case SNode::Kind::Unary:
        return bv::eval_unop(n.unop, sess.node(n.a).type, ev(n.a));
      case SNode::Kind::Binary:
        return bv::eval_binop(n.binop, sess.node(n.a).type, ev(n.a), ev(n.b));
      case SNode::Kind::Ternary:
        return ev(n.a) ? ev(n.b) : ev(n.c);
      case SNode::Kind::Cast:
        return bv::eval_cast(sess.node(n.a).type, n.type, ev(n.a));
      case SNode::Kind::Select: {
        ArrVal a = array_val(n.name);
        uint64_t ix = ev(n.a);
        auto it = a.cells.find(ix);
        uint64_t raw = it != a.cells.end() ? it->second : a.dflt;
        return bv::trunc(raw, n.type.width);
      }
    }
    return 0;
  };

  EvalOutcome out;
  out.atom_true.assign(size_t(depth), false);
  out.assumes_ok.assign(size_t(depth), true);

  for (const GuardedEquation& eq : sess.equations()) {
    int frame = std::max(eq.frame, 0);
    if (eq.frame >= depth) break;
    switch (eq.kind) {
      case EqKind::Define:
        val[eq.lhs.key()] = ev(eq.rhs);
        break;
      case EqKind::Property:
        val[eq.lhs.key()] = ev(eq.rhs);
        if (val[eq.lhs.key()]) out.atom_true[size_t(frame)] = true;
        break;
      case EqKind::Assume: {
        bool g = eq.guard == kNoExpr ? true : ev(eq.guard) != 0;
        if (g && ev(eq.rhs) == 0) out.assumes_ok[size_t(frame)] = false;
        break;
      }
      case EqKind::Store: {
        ArrVal a = array_val(eq.array_prev);
        bool g = eq.guard == kNoExpr ? true : ev(eq.guard) != 0;
        if (g) a.cells[ev(eq.index)] = ev(eq.rhs);
        arrays[eq.lhs.key()] = std::move(a);
        break;
      }
    }
  }
  return out;
}

namespace {

struct ProgGen {
  std::mt19937_64& rng;
  std::ostringstream out;
  struct V {
    std::string name;
    Type t;
    bool input;
  };
  std::vector<V> vars;
  bool have_array = false;
  int asserts = 0;

  explicit ProgGen(std::mt19937_64& r) : rng(r) {}

  uint64_t pick(uint64_t n) { return rng() % n; }
  bool chance(int pct) { return int(pick(100)) < pct; }

  Type rand_type() {
    switch (pick(4)) {
      case 0: return Type::boolean();
      case 1: return Type::unsigned_(2);
      case 2: return Type::unsigned_(3);
      default: return Type::signed_(3);
    }
  }

  std::vector<const V*> vars_of(Type t, bool allow_input = true) {
    std::vector<const V*> out;
    for (const auto& v : vars)
      if (v.t.same_scalar(t) && (allow_input || !v.input))
        out.push_back(&v);
    return out;
  }

  std::string literal(Type t) {
    if (t.is_bool()) return chance(50) ? "true" : "false";
    return std::to_string(pick(uint64_t(1) << std::min(t.width, 4u)));
  }

  // An expression that infers its own type without context.
  std::string self_typed(Type t, int depth) {
    auto vs = vars_of(t);
    if (!vs.empty() && chance(70))
      return vs[pick(vs.size())]->name;
    if (have_array && t.same_scalar(Type::unsigned_(2)) && chance(30))
      return "arr[" + expr(Type::unsigned_(2), depth - 1) + "]";
    return "(" + expr(t, depth - 1) + " as " + t.str() + ")";
  }

  std::string bool_expr(int depth) {
    if (depth <= 0) {
      auto vs = vars_of(Type::boolean());
      if (!vs.empty() && chance(60)) return vs[pick(vs.size())]->name;
      return literal(Type::boolean());
    }
    switch (pick(6)) {
      case 0: {
        Type t = chance(50) ? Type::unsigned_(2) : Type::unsigned_(3);
        static const char* ops[] = {"==", "!=", "<", "<=", ">", ">="};
        return "(" + self_typed(t, depth) + " " + ops[pick(6)] + " " +
               expr(t, depth - 1) + ")";
      }
      case 1:
        return "!(" + bool_expr(depth - 1) + ")";
      case 2:
        return "(" + bool_expr(depth - 1) + " & " + bool_expr(depth - 1) + ")";
      case 3:
        return "(" + bool_expr(depth - 1) + " | " + bool_expr(depth - 1) + ")";
      default: {
        auto vs = vars_of(Type::boolean());
        if (!vs.empty()) return vs[pick(vs.size())]->name;
        return literal(Type::boolean());
      }
    }
  }

  std::string expr(Type t, int depth) {
    if (t.is_bool()) return bool_expr(depth);
    if (depth <= 0) {
      auto vs = vars_of(t);
      if (!vs.empty() && chance(60)) return vs[pick(vs.size())]->name;
      return literal(t);
    }
    switch (pick(10)) {
      case 0:
      case 1: {
        static const char* ops[] = {"+", "-", "&", "|", "^"};
        return "(" + expr(t, depth - 1) + " " + ops[pick(5)] + " " +
               expr(t, depth - 1) + ")";
      }
      case 2: {
        static const char* ops[] = {"*", "/", "%", "<<", ">>"};
        return "(" + self_typed(t, depth) + " " + ops[pick(5)] + " " +
               expr(t, depth - 1) + ")";
      }
      case 3:
        return "(" + bool_expr(depth - 1) + " ? " + expr(t, depth - 1) +
               " : " + expr(t, depth - 1) + ")";
      case 4: {
        Type other = rand_type();
        return "(" + self_typed(other, depth - 1) + " as " + t.str() + ")";
      }
      case 5:
        if (chance(30)) return "nondet()";
        [[fallthrough]];
      default: {
        auto vs = vars_of(t);
        if (!vs.empty() && chance(70)) return vs[pick(vs.size())]->name;
        if (have_array && t.same_scalar(Type::unsigned_(2)))
          return "arr[" + expr(Type::unsigned_(2), 0) + "]";
        return literal(t);
      }
    }
  }

  void stmt(int depth, int indent) {
    std::string pad(size_t(indent) * 2, ' ');
    switch (pick(8)) {
      case 0:
      case 1:
      case 2: {
        auto targets = vars_of(rand_type(), /*allow_input=*/false);
        if (targets.empty()) {
          out << pad << "assert(" << bool_expr(2) << ");\n";
          ++asserts;
          return;
        }
        const V* v = targets[pick(targets.size())];
        out << pad << v->name << " := " << expr(v->t, 2) << ";\n";
        return;
      }
      case 3: {
        out << pad << "if (" << bool_expr(2) << ") {\n";
        int n = 1 + int(pick(2));
        for (int i = 0; i < n; ++i) stmt(depth - 1, indent + 1);
        out << pad << "}";
        if (chance(50)) {
          out << " else {\n";
          stmt(depth - 1, indent + 1);
          out << pad << "}";
        }
        out << "\n";
        return;
      }
      case 4:
        out << pad << "assert(" << bool_expr(2) << ");\n";
        ++asserts;
        return;
      case 5:
        if (chance(40)) {
          out << pad << "assume(" << bool_expr(1) << ");\n";
          return;
        }
        [[fallthrough]];
      case 6:
        if (have_array && chance(60)) {
          out << pad << "arr[" << expr(Type::unsigned_(2), 1)
              << "] := " << expr(Type::unsigned_(2), 1) << ";\n";
          return;
        }
        [[fallthrough]];
      default: {
        auto targets = vars_of(rand_type(), false);
        if (targets.empty()) {
          out << pad << "assert(" << bool_expr(1) << ");\n";
          ++asserts;
          return;
        }
        const V* v = targets[pick(targets.size())];
        out << pad << v->name << " := " << expr(v->t, 1) << ";\n";
        return;
      }
    }
  }

  std::string run() {
    int ninputs = int(pick(3));
    for (int i = 0; i < ninputs; ++i) {
      Type t = chance(50) ? Type::boolean() : Type::unsigned_(2);
      std::string name = "in" + std::to_string(i);
      out << "input " << t.str() << " " << name << ";\n";
      vars.push_back(V{name, t, true});
    }
    int nstate = 2 + int(pick(2));
    for (int i = 0; i < nstate; ++i) {
      Type t = rand_type();
      std::string name = "s" + std::to_string(i);
      out << "state " << t.str() << " " << name << " := ";
      if (chance(20))
        out << "nondet()";
      else
        out << literal(t);
      out << ";\n";
      vars.push_back(V{name, t, false});
    }
    if (chance(25)) {
      have_array = true;
      out << "state u2[4] arr := " << pick(4) << ";\n";
    }
    out << "loop main {\n";
    int n = 3 + int(pick(5));
    for (int i = 0; i < n; ++i) stmt(2, 1);
    if (chance(20)) {
      out << "  for fi in 0 .. 2 {\n";
      auto targets = vars_of(Type::unsigned_(3), false);
      if (!targets.empty())
        out << "    " << targets[0]->name << " := " << targets[0]->name
            << " + (fi as u3);\n";
      else
        out << "    assert(true);\n";
      out << "  }\n";
    }
    if (asserts == 0) {
      out << "  assert(" << bool_expr(2) << ");\n";
      ++asserts;
    }
    out << "}\n";
    return out.str();
  }
};

}  // namespace

std::string random_program(std::mt19937_64& rng) {
  // Structured families keep the depth distribution interesting.
  std::mt19937_64 local(rng());
  switch (local() % 5) {
    case 0: {
      uint64_t m = 2 + local() % 5;
      uint64_t d = 1 + local() % 6;
      std::ostringstream os;
      os << "state u3 x := 0;\n"
         << "loop main {\n"
         << "  x := x + 1;\n"
         << "  if (x == " << m << ") { x := 0; }\n"
         << "  assert(x != " << d << ");\n"
         << "}\n";
      return os.str();
    }
    case 1: {
      uint64_t d = 1 + local() % 5;
      std::ostringstream os;
      os << "input u2 t;\n"
         << "state u3 c := 0;\n"
         << "state u3 seen := 0;\n"
         << "loop main {\n"
         << "  c := c + 1;\n"
         << "  if (t == 3) { seen := seen + 1; }\n"
         << "  assert((seen <= c) & (seen != " << d << "));\n"
         << "}\n";
      return os.str();
    }
    default: {
      ProgGen g(rng);
      return g.run();
    }
  }
}

std::vector<std::vector<int>> random_cnf(std::mt19937_64& rng, int nvars,
                                         int nclauses) {
  std::vector<std::vector<int>> out;
  for (int i = 0; i < nclauses; ++i) {
    std::set<int> vars;
    while (int(vars.size()) < 3 && int(vars.size()) < nvars)
      vars.insert(1 + int(rng() % uint64_t(nvars)));
    std::vector<int> cl;
    for (int v : vars) cl.push_back(rng() % 2 ? v : -v);
    out.push_back(std::move(cl));
  }
  return out;
}

}  // namespace ibmc::test
