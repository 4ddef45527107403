#pragma once

#include <map>
#include <unordered_map>
#include <vector>

#include "sat.hpp"
#include "symex.hpp"

namespace ibmc {

// Bit-blasts guarded SSA equations into CNF over solver literals. Names
// are encoded at most once (LSB first); encoding is incremental and
// clause growth is monotone. Refinable operators (mul/div/rem) can be
// encoded as over- or under-approximations guarded by an escape literal
// so a refinement round can retire them.
class Encoder {
 public:
  enum class RefineMode { Off, Over, Under };

  Encoder(UnwindingSession& sess, sat::Solver& solver,
          RefineMode mode = RefineMode::Off)
      : sess_(sess), solver_(solver), mode_(mode) {
    true_lit_ = sat::mkLit(solver_.new_var(), false);
    solver_.add_clause({true_lit_});
  }

  struct RefineSite {
    int eq_id = -1;
    BinOp op = BinOp::Mul;
    Type type;
    SRef a = kNoExpr, b = kNoExpr;
    SsaName result;
    unsigned bits = 0;  // current approximation precision
    sat::Lit beta = sat::lit_Undef;
    bool exact = false;
  };
  struct SelectInst {
    int eq_id = -1;
    SsaName version;
    SsaName result;
    SRef index = kNoExpr;
  };
  struct StoreInst {
    int eq_id = -1;
    SsaName version;  // defined by this store
    SsaName prev;
    SRef index = kNoExpr;
    SRef value = kNoExpr;
    sat::Lit guard;  // true literal when unconditional
  };

  // Returns the clause count added. In a refinement mode, refinable
  // operator equations only allocate their result and register a site.
  int encode_equation(int eq_id);

  // sel <-> OR(atoms) as full biconditionals; empty list yields the
  // constant-false literal, a single atom is returned as-is.
  sat::Lit encode_or_selector(const std::vector<sat::Lit>& atoms);
  // Additionally emits (sel | alpha).
  sat::Lit encode_property_selector(const std::vector<sat::Lit>& atoms,
                                    sat::Lit alpha);

  // Approximation clauses for a refinable site at precision `bits`,
  // escape-guarded by `beta`. Over: only the low result bits are
  // constrained (division constrains nothing below full width). Under:
  // operands are clamped to `bits` and the reduced circuit is exact on
  // that subdomain.
  int encode_over_approx(RefineSite& site, unsigned bits, sat::Lit beta);
  int encode_under_approx(RefineSite& site, unsigned bits, sat::Lit beta);
  // Full-width permanent encoding (no escape).
  int encode_exact(RefineSite& site);

  std::vector<RefineSite>& refine_sites() { return refine_sites_; }
  const std::vector<SelectInst>& selects() const { return selects_; }
  const std::vector<StoreInst>& stores() const { return stores_; }

  bool name_encoded(const SsaName& n) const {
    return lits_.count(n.key()) != 0;
  }
  const std::vector<sat::Lit>& lits_of(const SsaName& n);
  sat::Lit atom_lit(const PropertyAtom& a) {
    return lits_of(a.name)[0];
  }

  uint64_t model_of_name(const SsaName& n) const;
  uint64_t model_of_ref(SRef r) const;

  // Equality literal between two Name/Const operand refs (cached);
  // built unguarded, for lazy array lemmas.
  sat::Lit value_eq_lit(SRef a, SRef b);
  // index-of-select == index-of-store style helper over bit vectors.
  sat::Lit vec_eq_lit(const std::vector<sat::Lit>& a,
                      const std::vector<sat::Lit>& b);

  void add_clause(std::vector<sat::Lit> cl);
  uint64_t clauses_added() const { return clauses_added_; }
  sat::Lit lit_true() const { return true_lit_; }
  sat::Lit lit_false() const { return ~true_lit_; }
  sat::Lit fresh_lit() { return sat::mkLit(solver_.new_var(), false); }

  std::vector<sat::Lit> enc_expr(SRef r);

 private:
  using Lits = std::vector<sat::Lit>;

  sat::Lit g_and(sat::Lit a, sat::Lit b);
  sat::Lit g_or(sat::Lit a, sat::Lit b);
  sat::Lit g_xor(sat::Lit a, sat::Lit b);
  sat::Lit g_mux(sat::Lit s, sat::Lit t, sat::Lit e);
  sat::Lit g_and_vec(const Lits& ls);
  sat::Lit g_or_vec(const Lits& ls);

  Lits const_bits(Type t, uint64_t v) const;
  Lits mk_fresh(unsigned w);
  Lits vec_add(const Lits& a, const Lits& b, sat::Lit cin);
  Lits vec_neg(const Lits& a);
  Lits vec_and_bit(const Lits& a, sat::Lit b);
  Lits vec_mux(sat::Lit s, const Lits& t, const Lits& e);
  sat::Lit vec_ult(const Lits& a, const Lits& b);
  sat::Lit vec_slt(Lits a, Lits b);
  Lits vec_mul(const Lits& a, const Lits& b);
  void vec_udivrem(const Lits& x, const Lits& y, Lits& q, Lits& r);
  Lits vec_shift(const Lits& a, const Lits& amt, BinOp op, bool sgn);
  Lits enc_binary(BinOp op, Type t, const Lits& a, const Lits& b);
  Lits enc_refinable(BinOp op, Type t, const Lits& a, const Lits& b);
  void tie(const Lits& a, const Lits& b);  // pairwise equivalence

  UnwindingSession& sess_;
  sat::Solver& solver_;
  RefineMode mode_;
  sat::Lit true_lit_;
  sat::Lit escape_ = sat::lit_Undef;  // appended to clauses while set

  std::unordered_map<uint64_t, Lits> lits_;
  std::vector<RefineSite> refine_sites_;
  std::vector<SelectInst> selects_;
  std::vector<StoreInst> stores_;
  std::map<std::pair<uint64_t, uint64_t>, sat::Lit> eq_cache_;
  uint64_t clauses_added_ = 0;
};

}  // namespace ibmc
