#include "cnf.hpp"

#include <algorithm>
#include <cassert>

namespace ibmc {

using sat::Lit;
using sat::lit_Undef;

void Encoder::add_clause(std::vector<Lit> cl) {
  if (escape_ != lit_Undef) cl.push_back(escape_);
  solver_.add_clause(std::move(cl));
  ++clauses_added_;
}

Lit Encoder::g_and(Lit a, Lit b) {
  if (a == lit_false() || b == lit_false()) return lit_false();
  if (a == lit_true()) return b;
  if (b == lit_true()) return a;
  if (a == b) return a;
  if (a == ~b) return lit_false();
  Lit o = fresh_lit();
  add_clause({~o, a});
  add_clause({~o, b});
  add_clause({o, ~a, ~b});
  return o;
}

Lit Encoder::g_or(Lit a, Lit b) { return ~g_and(~a, ~b); }

Lit Encoder::g_xor(Lit a, Lit b) {
  if (a == lit_false()) return b;
  if (b == lit_false()) return a;
  if (a == lit_true()) return ~b;
  if (b == lit_true()) return ~a;
  if (a == b) return lit_false();
  if (a == ~b) return lit_true();
  Lit o = fresh_lit();
  add_clause({~o, a, b});
  add_clause({~o, ~a, ~b});
  add_clause({o, ~a, b});
  add_clause({o, a, ~b});
  return o;
}

Lit Encoder::g_mux(Lit s, Lit t, Lit e) {
  if (s == lit_true()) return t;
  if (s == lit_false()) return e;
  if (t == e) return t;
  if (t == lit_true() && e == lit_false()) return s;
  if (t == lit_false() && e == lit_true()) return ~s;
  Lit o = fresh_lit();
  add_clause({~s, ~t, o});
  add_clause({~s, t, ~o});
  add_clause({s, ~e, o});
  add_clause({s, e, ~o});
  return o;
}

Lit Encoder::g_and_vec(const Lits& ls) {
  Lit acc = lit_true();
  for (Lit l : ls) acc = g_and(acc, l);
  return acc;
}

Lit Encoder::g_or_vec(const Lits& ls) {
  Lit acc = lit_false();
  for (Lit l : ls) acc = g_or(acc, l);
  return acc;
}

Encoder::Lits Encoder::const_bits(Type t, uint64_t v) const {
  Lits out(t.width);
  for (unsigned i = 0; i < t.width; ++i)
    out[i] = ((v >> i) & 1) ? true_lit_ : ~true_lit_;
  return out;
}

Encoder::Lits Encoder::mk_fresh(unsigned w) {
  Lits out(w);
  for (unsigned i = 0; i < w; ++i) out[i] = fresh_lit();
  return out;
}

Encoder::Lits Encoder::vec_add(const Lits& a, const Lits& b, Lit cin) {
  Lits out(a.size());
  Lit carry = cin;
  for (size_t i = 0; i < a.size(); ++i) {
    Lit axb = g_xor(a[i], b[i]);
    out[i] = g_xor(axb, carry);
    carry = g_or(g_and(a[i], b[i]), g_and(carry, axb));
  }
  return out;
}

Encoder::Lits Encoder::vec_neg(const Lits& a) {
  Lits inv(a.size());
  for (size_t i = 0; i < a.size(); ++i) inv[i] = ~a[i];
  return vec_add(inv, const_bits(Type::unsigned_(unsigned(a.size())), 0),
                 lit_true());
}

Encoder::Lits Encoder::vec_and_bit(const Lits& a, Lit b) {
  Lits out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = g_and(a[i], b);
  return out;
}

Encoder::Lits Encoder::vec_mux(Lit s, const Lits& t, const Lits& e) {
  Lits out(t.size());
  for (size_t i = 0; i < t.size(); ++i) out[i] = g_mux(s, t[i], e[i]);
  return out;
}

sat::Lit Encoder::vec_ult(const Lits& a, const Lits& b) {
  // borrow chain: borrow' = (a_i == b_i) ? borrow : b_i
  Lit borrow = lit_false();
  for (size_t i = 0; i < a.size(); ++i) {
    Lit eqbit = ~g_xor(a[i], b[i]);
    borrow = g_mux(eqbit, borrow, b[i]);
  }
  return borrow;
}

sat::Lit Encoder::vec_slt(Lits a, Lits b) {
  a.back() = ~a.back();  // offset-binary trick
  b.back() = ~b.back();
  return vec_ult(a, b);
}

Encoder::Lits Encoder::vec_mul(const Lits& a, const Lits& b) {
  size_t w = a.size();
  Lits acc = vec_and_bit(a, b[0]);
  for (size_t i = 1; i < w; ++i) {
    Lits shifted(w, lit_false());
    for (size_t j = 0; j + i < w; ++j) shifted[j + i] = a[j];
    acc = vec_add(acc, vec_and_bit(shifted, b[i]), lit_false());
  }
  return acc;
}

void Encoder::vec_udivrem(const Lits& x, const Lits& y, Lits& q, Lits& r) {
  // Restoring division, w+1-bit remainder register. With y == 0 the
  // comparison never fails, so q = all-ones and r = x (SMT-LIB semantics).
  size_t w = x.size();
  Lits rem(w + 1, lit_false());
  Lits yext = y;
  yext.push_back(lit_false());
  q.assign(w, lit_false());
  for (size_t i = w; i-- > 0;) {
    rem.insert(rem.begin(), x[i]);
    rem.pop_back();
    Lit ge = ~vec_ult(rem, yext);
    q[i] = ge;
    Lits diff = vec_add(rem, vec_neg(yext), lit_false());
    rem = vec_mux(ge, diff, rem);
  }
  r.assign(rem.begin(), rem.begin() + long(w));
}

Encoder::Lits Encoder::vec_shift(const Lits& a, const Lits& amt, BinOp op,
                                 bool sgn) {
  size_t w = a.size();
  Lit fillbit = (op == BinOp::Shr && sgn) ? a.back() : lit_false();
  Lits cur = a;
  unsigned stages = 0;
  while ((size_t(1) << stages) < w) ++stages;
  for (unsigned s = 0; s < stages && s < amt.size(); ++s) {
    size_t dist = size_t(1) << s;
    Lits shifted(w, fillbit);
    if (op == BinOp::Shl) {
      for (size_t j = 0; j + dist < w; ++j) shifted[j + dist] = cur[j];
      for (size_t j = 0; j < dist && j < w; ++j) shifted[j] = lit_false();
    } else {
      for (size_t j = 0; j + dist < w; ++j) shifted[j] = cur[j + dist];
    }
    cur = vec_mux(amt[s], shifted, cur);
  }
  // Amounts >= w (including set bits beyond the staged range) saturate.
  Lits wconst = const_bits(Type::unsigned_(unsigned(amt.size())), w);
  Lit ovf = ~vec_ult(amt, wconst);
  Lits fill(w, fillbit);
  return vec_mux(ovf, fill, cur);
}

Encoder::Lits Encoder::enc_refinable(BinOp op, Type t, const Lits& a,
                                     const Lits& b) {
  if (op == BinOp::Mul) return vec_mul(a, b);
  bool sgn = t.is_signed();
  Lits q, r;
  if (!sgn) {
    vec_udivrem(a, b, q, r);
    return op == BinOp::Div ? q : r;
  }
  Lit sa = a.back(), sb = b.back();
  Lits ua = vec_mux(sa, vec_neg(a), a);
  Lits ub = vec_mux(sb, vec_neg(b), b);
  vec_udivrem(ua, ub, q, r);
  if (op == BinOp::Div) {
    Lits qs = vec_mux(g_xor(sa, sb), vec_neg(q), q);
    // x / 0 is -1 regardless of sign.
    Lit yzero = lit_true();
    for (Lit bl : b) yzero = g_and(yzero, ~bl);
    return vec_mux(yzero, const_bits(t, ~uint64_t(0)), qs);
  }
  return vec_mux(sa, vec_neg(r), r);
}

Encoder::Lits Encoder::enc_binary(BinOp op, Type t, const Lits& a,
                                  const Lits& b) {
  bool sgn = t.is_signed();
  switch (op) {
    case BinOp::Add: return vec_add(a, b, lit_false());
    case BinOp::Sub: {
      Lits binv(b.size());
      for (size_t i = 0; i < b.size(); ++i) binv[i] = ~b[i];
      return vec_add(a, binv, lit_true());
    }
    case BinOp::Mul:
    case BinOp::Div:
    case BinOp::Rem:
      return enc_refinable(op, t, a, b);
    case BinOp::And: {
      Lits out(a.size());
      for (size_t i = 0; i < a.size(); ++i) out[i] = g_and(a[i], b[i]);
      return out;
    }
    case BinOp::Or: {
      Lits out(a.size());
      for (size_t i = 0; i < a.size(); ++i) out[i] = g_or(a[i], b[i]);
      return out;
    }
    case BinOp::Xor: {
      Lits out(a.size());
      for (size_t i = 0; i < a.size(); ++i) out[i] = g_xor(a[i], b[i]);
      return out;
    }
    case BinOp::Shl:
    case BinOp::Shr:
      return vec_shift(a, b, op, sgn);
    case BinOp::Eq:
      return {vec_eq_lit(a, b)};
    case BinOp::Ne:
      return {~vec_eq_lit(a, b)};
    case BinOp::Lt:
      return {sgn ? vec_slt(a, b) : vec_ult(a, b)};
    case BinOp::Le:
      return {~(sgn ? vec_slt(b, a) : vec_ult(b, a))};
    case BinOp::Gt:
      return {sgn ? vec_slt(b, a) : vec_ult(b, a)};
    case BinOp::Ge:
      return {~(sgn ? vec_slt(a, b) : vec_ult(a, b))};
  }
  return {};
}

sat::Lit Encoder::vec_eq_lit(const Lits& a, const Lits& b) {
  Lit acc = lit_true();
  for (size_t i = 0; i < a.size(); ++i) acc = g_and(acc, ~g_xor(a[i], b[i]));
  return acc;
}

const std::vector<Lit>& Encoder::lits_of(const SsaName& n) {
  auto it = lits_.find(n.key());
  if (it != lits_.end()) return it->second;
  // Only source names (inputs, nondet, havoc) may be created on demand.
  assert(sess_.is_source(n) && "define-before-use violated in encoder");
  Type t = sess_.name_type(n);
  assert(!t.is_array() && "array versions carry no literals");
  auto [it2, _] = lits_.emplace(n.key(), mk_fresh(t.width));
  return it2->second;
}

std::vector<Lit> Encoder::enc_expr(SRef r) {
  const SNode& n = sess_.node(r);
  switch (n.kind) {
    case SNode::Kind::Const:
      return const_bits(n.type, n.value);
    case SNode::Kind::Name:
      return lits_of(n.name);
    case SNode::Kind::Unary: {
      Lits a = enc_expr(n.a);
      switch (n.unop) {
        case UnOp::Neg: return vec_neg(a);
        case UnOp::Not: return {~a[0]};
        case UnOp::BitNot: {
          for (auto& l : a) l = ~l;
          return a;
        }
      }
      return a;
    }
    case SNode::Kind::Binary: {
      Lits a = enc_expr(n.a);
      Lits b = enc_expr(n.b);
      Type opt = sess_.node(n.a).type;
      return enc_binary(n.binop, opt, a, b);
    }
    case SNode::Kind::Ternary: {
      Lit s = enc_expr(n.a)[0];
      Lits t = enc_expr(n.b);
      Lits e = enc_expr(n.c);
      return vec_mux(s, t, e);
    }
    case SNode::Kind::Cast: {
      Lits a = enc_expr(n.a);
      Type from = sess_.node(n.a).type;
      Type to = n.type;
      if (to.is_bool() && !from.is_bool()) return {g_or_vec(a)};
      Lits out(to.width);
      Lit ext = from.is_signed() ? a.back() : lit_false();
      for (unsigned i = 0; i < to.width; ++i)
        out[i] = i < from.width ? a[i] : ext;
      return out;
    }
    case SNode::Kind::Select:
      assert(false && "select must be the sole rhs of its equation");
      return {};
  }
  return {};
}

int Encoder::encode_equation(int eq_id) {
  const GuardedEquation& eq = sess_.equations()[size_t(eq_id)];
  uint64_t before = clauses_added_;
  switch (eq.kind) {
    case EqKind::Define: {
      const SNode& rhs = sess_.node(eq.rhs);
      if (rhs.kind == SNode::Kind::Select) {
        SelectInst si;
        si.eq_id = eq_id;
        si.version = rhs.name;
        si.result = eq.lhs;
        si.index = rhs.a;
        lits_[eq.lhs.key()] = mk_fresh(rhs.type.width);
        (void)enc_expr(rhs.a);  // index literals exist for lazy lemmas
        selects_.push_back(si);
        break;
      }
      if (mode_ != RefineMode::Off && rhs.kind == SNode::Kind::Binary &&
          binop_is_refinable(rhs.binop)) {
        RefineSite site;
        site.eq_id = eq_id;
        site.op = rhs.binop;
        site.type = rhs.type;
        site.a = rhs.a;
        site.b = rhs.b;
        site.result = eq.lhs;
        lits_[eq.lhs.key()] = mk_fresh(rhs.type.width);
        (void)enc_expr(rhs.a);
        (void)enc_expr(rhs.b);
        refine_sites_.push_back(site);
        break;
      }
      Lits v = enc_expr(eq.rhs);
      lits_[eq.lhs.key()] = std::move(v);
      break;
    }
    case EqKind::Property: {
      Lits v = enc_expr(eq.rhs);
      lits_[eq.lhs.key()] = std::move(v);
      break;
    }
    case EqKind::Assume: {
      Lit c = enc_expr(eq.rhs)[0];
      if (eq.guard == kNoExpr) {
        add_clause({c});
      } else {
        Lit g = enc_expr(eq.guard)[0];
        add_clause({~g, c});
      }
      break;
    }
    case EqKind::Store: {
      StoreInst st;
      st.eq_id = eq_id;
      st.version = eq.lhs;
      st.prev = eq.array_prev;
      st.index = eq.index;
      st.value = eq.rhs;
      st.guard = eq.guard == kNoExpr ? lit_true() : enc_expr(eq.guard)[0];
      (void)enc_expr(eq.index);
      (void)enc_expr(eq.rhs);
      stores_.push_back(st);
      break;
    }
  }
  return int(clauses_added_ - before);
}

sat::Lit Encoder::encode_or_selector(const std::vector<Lit>& atoms) {
  if (atoms.empty()) return lit_false();
  if (atoms.size() == 1) return atoms[0];
  Lit sel = fresh_lit();
  std::vector<Lit> big{~sel};
  for (Lit a : atoms) {
    big.push_back(a);
    add_clause({sel, ~a});
  }
  add_clause(std::move(big));
  return sel;
}

sat::Lit Encoder::encode_property_selector(const std::vector<Lit>& atoms,
                                           Lit alpha) {
  Lit sel = encode_or_selector(atoms);
  add_clause({sel, alpha});
  return sel;
}

void Encoder::tie(const Lits& a, const Lits& b) {
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == b[i]) continue;
    add_clause({~a[i], b[i]});
    add_clause({a[i], ~b[i]});
  }
}

int Encoder::encode_over_approx(RefineSite& site, unsigned bits,
                                Lit beta) {
  uint64_t before = clauses_added_;
  site.bits = bits;
  site.beta = beta;
  unsigned w = site.type.width;
  if (bits >= w) return int(clauses_added_ - before);  // caller encodes exact
  escape_ = beta;
  if (site.op == BinOp::Mul && bits > 0) {
    // Low product bits depend only on the low operand bits.
    Lits a = enc_expr(site.a);
    Lits b = enc_expr(site.b);
    a.resize(bits);
    b.resize(bits);
    Lits low = vec_mul(a, b);
    const Lits& res = lits_of(site.result);
    Lits res_low(res.begin(), res.begin() + long(bits));
    tie(low, res_low);
  }
  // Division and remainder low bits depend on whole operands; anything
  // below full width stays unconstrained.
  escape_ = lit_Undef;
  return int(clauses_added_ - before);
}

int Encoder::encode_under_approx(RefineSite& site, unsigned bits,
                                 Lit beta) {
  uint64_t before = clauses_added_;
  site.bits = bits;
  site.beta = beta;
  unsigned w = site.type.width;
  if (bits >= w) return int(clauses_added_ - before);
  if (bits == 0) bits = 1;
  bool sgn = site.type.is_signed();
  escape_ = beta;
  Lits a = enc_expr(site.a);
  Lits b = enc_expr(site.b);
  // Clamp operands: high bits equal the zero/sign extension of bit bits-1.
  auto clamp = [&](const Lits& v) {
    Lit ext = sgn ? v[bits - 1] : lit_false();
    for (unsigned i = bits; i < w; ++i) {
      if (ext == lit_false()) {
        add_clause({~v[i]});
      } else {
        add_clause({~v[i], ext});
        add_clause({v[i], ~ext});
      }
    }
  };
  clamp(a);
  clamp(b);
  unsigned wp = site.op == BinOp::Mul ? std::min(w, 2 * bits)
                                      : std::min(w, bits + 1);
  Lits as(a.begin(), a.begin() + long(bits));
  Lits bs(b.begin(), b.begin() + long(bits));
  Lit ea = sgn ? as.back() : lit_false();
  Lit eb = sgn ? bs.back() : lit_false();
  while (as.size() < wp) as.push_back(ea);
  while (bs.size() < wp) bs.push_back(eb);
  Type tp{site.type.kind, wp, 0};
  Lit yzero = lit_Undef;
  Lits narrow;
  if (site.op == BinOp::Mul) {
    narrow = vec_mul(as, bs);
  } else {
    narrow = enc_refinable(site.op, tp, as, bs);
    if (site.op == BinOp::Div) {
      // Zero divisor yields full-width all-ones.
      yzero = lit_true();
      for (Lit bl : bs) yzero = g_and(yzero, ~bl);
      narrow = vec_mux(yzero, const_bits(tp, ~uint64_t(0)), narrow);
    }
  }
  const Lits& res = lits_of(site.result);
  Lits res_low(res.begin(), res.begin() + long(wp));
  tie(narrow, res_low);
  // Result extension bits: sign-extension of the narrow result for signed
  // operators, zero otherwise; unsigned division must extend with ones
  // when the divisor is zero.
  Lit extr = sgn ? res[wp - 1] : lit_false();
  for (unsigned i = wp; i < w; ++i) {
    if (site.op == BinOp::Div && !sgn) {
      add_clause({~yzero, res[i]});
      add_clause({yzero, ~res[i]});
    } else if (extr == lit_false()) {
      add_clause({~res[i]});
    } else {
      add_clause({~res[i], extr});
      add_clause({res[i], ~extr});
    }
  }
  escape_ = lit_Undef;
  return int(clauses_added_ - before);
}

int Encoder::encode_exact(RefineSite& site) {
  uint64_t before = clauses_added_;
  site.exact = true;
  site.bits = site.type.width;
  Lits a = enc_expr(site.a);
  Lits b = enc_expr(site.b);
  Lits v = enc_refinable(site.op, site.type, a, b);
  tie(v, lits_of(site.result));
  return int(clauses_added_ - before);
}

uint64_t Encoder::model_of_name(const SsaName& n) const {
  auto it = lits_.find(n.key());
  if (it == lits_.end()) return 0;
  uint64_t v = 0;
  for (size_t i = 0; i < it->second.size(); ++i)
    if (solver_.model_value(it->second[i])) v |= uint64_t(1) << i;
  return v;
}

uint64_t Encoder::model_of_ref(SRef r) const {
  const SNode& n = sess_.node(r);
  if (n.kind == SNode::Kind::Const) return n.value;
  assert(n.kind == SNode::Kind::Name);
  return model_of_name(n.name);
}

sat::Lit Encoder::value_eq_lit(SRef a, SRef b) {
  const SNode& na = sess_.node(a);
  const SNode& nb = sess_.node(b);
  auto keyof = [](const SNode& n) {
    if (n.kind == SNode::Kind::Name) return n.name.key() << 1;
    return (n.value << 1) | 1;
  };
  std::pair<uint64_t, uint64_t> key{keyof(na), keyof(nb)};
  if (key.first > key.second) std::swap(key.first, key.second);
  auto it = eq_cache_.find(key);
  if (it != eq_cache_.end()) return it->second;
  assert(escape_ == lit_Undef);
  Lit e = vec_eq_lit(enc_expr(a), enc_expr(b));
  eq_cache_[key] = e;
  return e;
}

}  // namespace ibmc
