#include "symex.hpp"

#include <algorithm>
#include <sstream>

namespace ibmc {

UnwindingSession::UnwindingSession(const Program& p,
                                   const std::string& loop_id,
                                   bool const_prop)
    : p_(p), const_prop_(const_prop) {
  assert(p.typed);
  const LoopDef* target = p.find_loop(loop_id);
  if (!target)
    throw UsageError("unknown loop id '" + loop_id + "'");
  target_ = target;
  for (size_t i = 0; i < p.loops.size(); ++i)
    if (&p.loops[i] == target) loop_index_ = int(i);

  for (const auto& [name, info] : p.vars)
    var_base_[name] = register_base(name, info.type);

  // Initial frame: declaration initializers in order, then the init block.
  init_frame_.step = -1;
  cur_ = &init_frame_;
  cur_frame_ = -1;
  name_step_ = 0;
  for (const auto& d : p.decls) {
    if (d.kind == VarKind::Input) continue;
    int base = var_base_.at(d.name);
    if (d.type.is_array()) {
      SsaName v = fresh_name(base, 0);
      env_[base] = v;
      array_contents_[v.key()] = *fold_const(*d.init);
    } else {
      SRef r = d.init ? symexpr(*d.init) : mk_const(d.type, 0);
      do_assign(base, d.type, r);
    }
  }
  exec_block(p.init_block);
  snapshot_boundary(init_frame_);
  cur_ = nullptr;
}

int UnwindingSession::register_base(const std::string& name, Type t) {
  bases_.push_back(BaseInfo{name, t});
  return int(bases_.size()) - 1;
}

SsaName UnwindingSession::fresh_name(int base, int step) {
  int64_t k = (int64_t(base) << 24) | int64_t(step);
  int ver = ver_counter_[k]++;
  return SsaName{base, step, ver};
}

SsaName UnwindingSession::fresh_temp(const std::string& prefix, Type t,
                                     int step) {
  int base = register_base(prefix + std::to_string(temp_counter_++), t);
  return SsaName{base, step, 0};
}

SRef UnwindingSession::mk_const(Type t, uint64_t v) {
  SNode n;
  n.kind = SNode::Kind::Const;
  n.type = t;
  n.value = bv::trunc(v, t.width);
  arena_.push_back(n);
  return SRef(arena_.size()) - 1;
}

SRef UnwindingSession::mk_name(const SsaName& nm) {
  SNode n;
  n.kind = SNode::Kind::Name;
  n.type = name_type(nm);
  n.name = nm;
  arena_.push_back(n);
  return SRef(arena_.size()) - 1;
}

std::optional<uint64_t> UnwindingSession::const_of(SRef r) const {
  if (r == kNoExpr) return std::nullopt;
  const SNode& n = arena_[size_t(r)];
  if (n.kind == SNode::Kind::Const) return n.value;
  return std::nullopt;
}

SRef UnwindingSession::mk_unary(UnOp op, SRef a) {
  const SNode& an = arena_[size_t(a)];
  if (auto v = const_of(a)) return mk_const(an.type, bv::eval_unop(op, an.type, *v));
  SNode n;
  n.kind = SNode::Kind::Unary;
  n.type = an.type;
  n.unop = op;
  n.a = a;
  arena_.push_back(n);
  return SRef(arena_.size()) - 1;
}

SRef UnwindingSession::mk_binary(BinOp op, SRef a, SRef b) {
  Type at = arena_[size_t(a)].type;
  Type rt = binop_is_compare(op) ? Type::boolean() : at;
  auto va = const_of(a), vb = const_of(b);
  if (va && vb) return mk_const(rt, bv::eval_binop(op, at, *va, *vb));
  SNode n;
  n.kind = SNode::Kind::Binary;
  n.type = rt;
  n.binop = op;
  n.a = a;
  n.b = b;
  arena_.push_back(n);
  return SRef(arena_.size()) - 1;
}

SRef UnwindingSession::mk_ternary(SRef c, SRef a, SRef b) {
  if (auto v = const_of(c)) return *v ? a : b;
  SNode n;
  n.kind = SNode::Kind::Ternary;
  n.type = arena_[size_t(a)].type;
  n.a = c;
  n.b = a;
  n.c = b;
  arena_.push_back(n);
  return SRef(arena_.size()) - 1;
}

SRef UnwindingSession::mk_cast(Type to, SRef a) {
  Type from = arena_[size_t(a)].type;
  if (auto v = const_of(a)) return mk_const(to, bv::eval_cast(from, to, *v));
  if (from.same_scalar(to)) return a;
  SNode n;
  n.kind = SNode::Kind::Cast;
  n.type = to;
  n.a = a;
  arena_.push_back(n);
  return SRef(arena_.size()) - 1;
}

SRef UnwindingSession::mk_and(SRef a, SRef b) {
  if (a == kNoExpr) return b;
  if (b == kNoExpr) return a;
  return mk_binary(BinOp::And, a, b);
}

SRef UnwindingSession::lift(SRef r, Type t) {
  const SNode& n = arena_[size_t(r)];
  if (n.kind == SNode::Kind::Const || n.kind == SNode::Kind::Name) return r;
  SsaName tmp = fresh_temp("t!", t, name_step_);
  GuardedEquation eq;
  eq.kind = EqKind::Define;
  eq.lhs = tmp;
  eq.rhs = r;
  emit(std::move(eq));
  return mk_name(tmp);
}

void UnwindingSession::collect_reads(SRef r, std::vector<SsaName>& out) const {
  if (r == kNoExpr) return;
  const SNode& n = arena_[size_t(r)];
  if (n.kind == SNode::Kind::Name || n.kind == SNode::Kind::Select)
    out.push_back(n.name);
  collect_reads(n.a, out);
  collect_reads(n.b, out);
  collect_reads(n.c, out);
}

int UnwindingSession::emit(GuardedEquation eq) {
  eq.id = int(eqs_.size());
  eq.frame = cur_frame_;
  eq.reads.clear();
  collect_reads(eq.guard, eq.reads);
  collect_reads(eq.rhs, eq.reads);
  collect_reads(eq.index, eq.reads);
  if (eq.array_prev.valid()) eq.reads.push_back(eq.array_prev);
  std::sort(eq.reads.begin(), eq.reads.end());
  eq.reads.erase(std::unique(eq.reads.begin(), eq.reads.end()),
                 eq.reads.end());
  if (eq.lhs.valid()) defined_.insert(eq.lhs.key());
  int id = eq.id;
  eqs_.push_back(std::move(eq));
  if (cur_) cur_->eq_ids.push_back(id);
  return id;
}

SRef UnwindingSession::read_var(int base, Type t) {
  auto it = env_.find(base);
  assert(it != env_.end());
  if (const_prop_) {
    auto c = const_store_.find(it->second.key());
    if (c != const_store_.end()) return mk_const(t, c->second);
  }
  return mk_name(it->second);
}

SRef UnwindingSession::read_input(int base, Type t) {
  auto it = frame_inputs_.find(base);
  if (it == frame_inputs_.end()) {
    SsaName n = fresh_name(base, std::max(cur_frame_, 0));
    frame_inputs_[base] = n;
    if (cur_) cur_->input_names.emplace_back(base, n);
    it = frame_inputs_.find(base);
  }
  (void)t;
  return mk_name(it->second);
}

SRef UnwindingSession::symexpr(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::IntLit:
    case Expr::Kind::BoolLit:
      return mk_const(e.type, e.value);
    case Expr::Kind::Var: {
      int base = var_base_.at(e.name);
      if (p_.var(e.name).kind == VarKind::Input)
        return read_input(base, e.type);
      return read_var(base, e.type);
    }
    case Expr::Kind::Nondet: {
      auto it = frame_nondets_.find(e.nondet_site);
      if (it == frame_nondets_.end()) {
        SsaName n = fresh_temp("nondet!" + std::to_string(e.nondet_site) + "@",
                               e.type, name_step_);
        frame_nondets_[e.nondet_site] = n;
        if (cur_) cur_->nondet_names.emplace_back(e.nondet_site, n);
        it = frame_nondets_.find(e.nondet_site);
      }
      return mk_name(it->second);
    }
    case Expr::Kind::Unary:
      return mk_unary(e.unop, symexpr(*e.kid(0)));
    case Expr::Kind::Binary: {
      SRef a = symexpr(*e.kid(0));
      SRef b = symexpr(*e.kid(1));
      if (binop_is_refinable(e.binop) && !(const_of(a) && const_of(b))) {
        // Refinable operators live in their own equation with name/const
        // operands so approximation and model checks can address them.
        Type t = e.type;
        SRef la = lift(a, e.kid(0)->type);
        SRef lb = lift(b, e.kid(1)->type);
        SRef op = mk_binary(e.binop, la, lb);
        if (const_of(op)) return op;
        SsaName res = fresh_temp("t!", t, name_step_);
        GuardedEquation eq;
        eq.kind = EqKind::Define;
        eq.lhs = res;
        eq.rhs = op;
        emit(std::move(eq));
        return mk_name(res);
      }
      return mk_binary(e.binop, a, b);
    }
    case Expr::Kind::Ternary: {
      SRef c = symexpr(*e.kid(0));
      if (auto v = const_of(c)) return symexpr(*v ? *e.kid(1) : *e.kid(2));
      SRef a = symexpr(*e.kid(1));
      SRef b = symexpr(*e.kid(2));
      return mk_ternary(c, a, b);
    }
    case Expr::Kind::Cast:
      return mk_cast(e.cast_to, symexpr(*e.kid(0)));
    case Expr::Kind::Index: {
      int base = var_base_.at(e.name);
      SRef idx = lift(symexpr(*e.kid(0)), e.kid(0)->type);
      SsaName res = fresh_temp("t!", e.type, name_step_);
      SNode sel;
      sel.kind = SNode::Kind::Select;
      sel.type = e.type;
      sel.name = env_.at(base);
      sel.a = idx;
      arena_.push_back(sel);
      GuardedEquation eq;
      eq.kind = EqKind::Define;
      eq.lhs = res;
      eq.rhs = SRef(arena_.size()) - 1;
      emit(std::move(eq));
      return mk_name(res);
    }
  }
  return kNoExpr;
}

void UnwindingSession::do_assign(int base, Type t, SRef value) {
  SsaName n = fresh_name(base, name_step_);
  GuardedEquation eq;
  eq.kind = EqKind::Define;
  eq.lhs = n;
  eq.rhs = value;
  emit(std::move(eq));
  env_[base] = n;
  if (const_prop_) {
    if (auto v = const_of(value))
      const_store_[n.key()] = bv::trunc(*v, t.width);
  }
}

SRef UnwindingSession::current_guard() {
  SRef g = kNoExpr;
  for (SRef piece : guard_stack_) g = mk_and(g, piece);
  return g;
}

void UnwindingSession::exec_block(const Block& b) {
  for (const auto& s : b) exec_stmt(*s);
}

void UnwindingSession::exec_stmt(const Stmt& s) {
  switch (s.kind) {
    case Stmt::Kind::Assign: {
      int base = var_base_.at(s.name);
      const VarInfo& vi = p_.var(s.name);
      if (s.index) {
        SRef idx = lift(symexpr(*s.index), s.index->type);
        SRef val = lift(symexpr(*s.rhs), s.rhs->type);
        SsaName prev = env_.at(base);
        SsaName next = fresh_name(base, name_step_);
        GuardedEquation eq;
        eq.kind = EqKind::Store;
        eq.guard = current_guard();
        eq.lhs = next;
        eq.array_prev = prev;
        eq.index = idx;
        eq.rhs = val;
        emit(std::move(eq));
        env_[base] = next;
      } else {
        do_assign(base, vi.type, symexpr(*s.rhs));
      }
      break;
    }
    case Stmt::Kind::Local: {
      int base = var_base_.at(s.name);
      if (s.decl_type.is_array()) {
        SsaName v = fresh_name(base, name_step_);
        env_[base] = v;
        array_contents_[v.key()] = *fold_const(*s.rhs);
      } else {
        do_assign(base, s.decl_type, symexpr(*s.rhs));
      }
      break;
    }
    case Stmt::Kind::If: {
      SRef c = symexpr(*s.cond);
      if (auto v = const_of(c)) {
        // Infeasible branches emit nothing.
        exec_block(*v ? s.body : s.else_body);
        return;
      }
      std::map<int, SsaName> before = env_;
      auto consts_before = const_store_;

      guard_stack_.push_back(c);
      exec_block(s.body);
      std::map<int, SsaName> after_then = env_;
      auto consts_then = const_store_;
      guard_stack_.pop_back();

      // Scalars roll back for the else branch; array versions are linear
      // (stores carry guards).
      for (auto& [base, n] : before)
        if (!bases_[size_t(base)].type.is_array()) env_[base] = n;
      const_store_ = consts_before;
      guard_stack_.push_back(mk_not(c));
      exec_block(s.else_body);
      guard_stack_.pop_back();

      // Phi merge via ternaries, one equation per divergent variable.
      std::map<int, SsaName> after_else = env_;
      auto consts_else = const_store_;
      for (const auto& [base, then_name] : after_then) {
        Type t = bases_[size_t(base)].type;
        if (t.is_array()) continue;
        auto e_it = after_else.find(base);
        SsaName else_name = e_it != after_else.end() ? e_it->second
                                                     : then_name;
        if (then_name == else_name) continue;
        auto arm = [&](const SsaName& n,
                       const std::unordered_map<uint64_t, uint64_t>& cs) {
          if (const_prop_) {
            auto f = cs.find(n.key());
            if (f != cs.end()) return mk_const(t, f->second);
          }
          return mk_name(n);
        };
        SRef merged = mk_ternary(c, arm(then_name, consts_then),
                                 arm(else_name, consts_else));
        do_assign(base, t, merged);
      }
      break;
    }
    case Stmt::Kind::Assert: {
      SRef cond = symexpr(*s.cond);
      SRef viol = mk_and(mk_and(pending_assume_, current_guard()),
                         mk_not(cond));
      if (auto v = const_of(viol)) {
        if (!*v) return;  // statically unreachable violation
      }
      SsaName atom = fresh_temp("p!", Type::boolean(), name_step_);
      GuardedEquation eq;
      eq.kind = EqKind::Property;
      eq.lhs = atom;
      eq.rhs = viol;
      eq.assert_id = s.assert_id;
      int id = emit(std::move(eq));
      PropertyAtom pa;
      pa.eq_id = id;
      pa.name = atom;
      pa.assert_id = s.assert_id;
      pa.solve_frame = std::max(cur_frame_, 0);
      if (cur_) cur_->atoms.push_back(pa);
      break;
    }
    case Stmt::Kind::Assume: {
      SRef cond = symexpr(*s.cond);
      SRef g = current_guard();
      SRef term = g == kNoExpr ? cond
                               : mk_binary(BinOp::Or, mk_not(g), cond);
      if (auto v = const_of(term)) {
        if (*v) return;  // vacuous
      }
      GuardedEquation eq;
      eq.kind = EqKind::Assume;
      eq.guard = g;
      eq.rhs = cond;
      emit(std::move(eq));
      pending_assume_ = mk_and(pending_assume_, term);
      // assume(x == K) on a feasible unconditional path pins x.
      if (const_prop_ && g == kNoExpr) {
        const SNode& cn = arena_[size_t(cond)];
        if (cn.kind == SNode::Kind::Binary && cn.binop == BinOp::Eq) {
          const SNode& l = arena_[size_t(cn.a)];
          const SNode& r = arena_[size_t(cn.b)];
          if (l.kind == SNode::Kind::Name && r.kind == SNode::Kind::Const)
            const_store_[l.name.key()] = r.value;
          else if (r.kind == SNode::Kind::Name && l.kind == SNode::Kind::Const)
            const_store_[r.name.key()] = l.value;
        }
      }
      break;
    }
    case Stmt::Kind::For:
      assert(false && "bounded loops must be expanded before unwinding");
      break;
  }
}

void UnwindingSession::snapshot_boundary(TimeframeFormula& f) const {
  for (const auto& [name, info] : p_.vars) {
    if (info.kind == VarKind::Input) continue;
    auto it = env_.find(var_base_.at(name));
    if (it != env_.end())
      f.boundary.emplace_back(it->first, it->second);
  }
}

void UnwindingSession::havoc_state() {
  if (!frames_.empty())
    throw UsageError("havoc_state after unwinding has begun");
  havocked_ = true;
  const std::set<std::string> modified = modified_vars(target_->body);
  for (const auto& name : modified) {
    auto it = p_.vars.find(name);
    if (it == p_.vars.end() || it->second.kind != VarKind::State) continue;
    int base = var_base_.at(name);
    SsaName fresh = fresh_name(base, 0);
    env_[base] = fresh;
    const_store_.erase(fresh.key());
    // Previous constant bindings are stale for the new name only; old
    // names keep their equations (dead, sliced away).
    if (it->second.type.is_array()) array_contents_.erase(fresh.key());
  }
  init_frame_.boundary.clear();
  snapshot_boundary(init_frame_);
}

void UnwindingSession::emit_entry_assumption(
    const std::vector<EntryAssert>& entry) {
  cur_ = &init_frame_;
  cur_frame_ = -1;
  name_step_ = 0;
  for (const auto& ea : entry) {
    SRef cond = symexpr(*ea.cond);
    SRef g = ea.guard ? symexpr(*ea.guard) : kNoExpr;
    SRef term = g == kNoExpr ? cond
                             : mk_binary(BinOp::Or, mk_not(g), cond);
    if (auto v = const_of(term)) {
      if (*v) continue;
    }
    GuardedEquation eq;
    eq.kind = EqKind::Assume;
    eq.guard = g;
    eq.rhs = cond;
    emit(std::move(eq));
    pending_assume_ = mk_and(pending_assume_, term);
  }
  cur_ = nullptr;
}

const TimeframeFormula& UnwindingSession::unwind_step() {
  cur_frame_ = int(frames_.size());
  name_step_ = cur_frame_ + 1;
  frames_.emplace_back();
  cur_ = &frames_.back();
  cur_->step = cur_frame_;
  cur_->loop_index = loop_index_;
  if (cur_frame_ >= 1) pending_assume_ = kNoExpr;
  frame_inputs_.clear();
  frame_nondets_.clear();
  guard_stack_.clear();

  exec_block(target_->body);

  snapshot_boundary(*cur_);
  const TimeframeFormula& out = *cur_;
  cur_ = nullptr;
  return out;
}

void UnwindingSession::switch_loop(const std::string& loop_id) {
  const LoopDef* next = p_.find_loop(loop_id);
  if (!next) throw UsageError("unknown loop id '" + loop_id + "'");
  target_ = next;
  for (size_t i = 0; i < p_.loops.size(); ++i)
    if (&p_.loops[i] == next) loop_index_ = int(i);
}

std::vector<PropertyAtom> UnwindingSession::atoms_through(int k) const {
  if (k > depth())
    throw UsageError("property_disjunction beyond current depth");
  std::vector<PropertyAtom> out = init_frame_.atoms;
  for (const auto& f : frames_) {
    if (f.step > k) break;
    out.insert(out.end(), f.atoms.begin(), f.atoms.end());
  }
  return out;
}

std::optional<SsaName> UnwindingSession::init_binding(int base) const {
  for (const auto& [b, n] : init_frame_.boundary)
    if (b == base) return n;
  return std::nullopt;
}

std::string UnwindingSession::name_str(const SsaName& n) const {
  std::string s = bases_[size_t(n.base)].name + "@" + std::to_string(n.step);
  if (n.ver > 0) s += "." + std::to_string(n.ver);
  return s;
}

std::string UnwindingSession::expr_str(SRef r) const {
  if (r == kNoExpr) return "true";
  const SNode& n = arena_[size_t(r)];
  switch (n.kind) {
    case SNode::Kind::Const:
      return bv::value_str(n.type, n.value);
    case SNode::Kind::Name:
      return name_str(n.name);
    case SNode::Kind::Unary:
      return std::string(unop_str(n.unop)) + "(" + expr_str(n.a) + ")";
    case SNode::Kind::Binary:
      return "(" + expr_str(n.a) + " " + binop_str(n.binop) + " " +
             expr_str(n.b) + ")";
    case SNode::Kind::Ternary:
      return "(" + expr_str(n.a) + " ? " + expr_str(n.b) + " : " +
             expr_str(n.c) + ")";
    case SNode::Kind::Cast:
      return "(" + expr_str(n.a) + " as " + n.type.str() + ")";
    case SNode::Kind::Select:
      return "select(" + name_str(n.name) + ", " + expr_str(n.a) + ")";
  }
  return "?";
}

std::string UnwindingSession::dump_ssa() const {
  std::ostringstream os;
  for (const auto& eq : eqs_) {
    if (eq.frame < 0)
      os << "init: ";
    else
      os << eq.frame << ": ";
    os << "[" << (eq.guard == kNoExpr ? "true" : expr_str(eq.guard)) << "] ";
    switch (eq.kind) {
      case EqKind::Define:
        os << name_str(eq.lhs) << " = " << expr_str(eq.rhs);
        break;
      case EqKind::Property:
        os << name_str(eq.lhs) << " = " << expr_str(eq.rhs) << "  ; assert a"
           << eq.assert_id;
        break;
      case EqKind::Assume:
        os << "assume " << expr_str(eq.rhs);
        break;
      case EqKind::Store:
        os << name_str(eq.lhs) << " = store(" << name_str(eq.array_prev)
           << ", " << expr_str(eq.index) << ", " << expr_str(eq.rhs) << ")";
        break;
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace ibmc
