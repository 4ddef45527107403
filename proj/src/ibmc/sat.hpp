#pragma once

#include <chrono>
#include <functional>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ibmc::sat {

using Var = int;
constexpr Var var_Undef = -1;

struct Lit {
  int x = -2;
  bool operator==(const Lit& o) const { return x == o.x; }
  bool operator!=(const Lit& o) const { return x != o.x; }
  bool operator<(const Lit& o) const { return x < o.x; }
};

inline Lit mkLit(Var v, bool sign = false) { return Lit{v + v + int(sign)}; }
inline Lit operator~(Lit p) { return Lit{p.x ^ 1}; }
inline bool sign(Lit p) { return p.x & 1; }
inline Var var(Lit p) { return p.x >> 1; }
inline int toInt(Lit p) { return p.x; }
constexpr Lit lit_Undef{-2};

// -1/+1 in DIMACS convention (variable v is printed as v+1).
inline int toDimacs(Lit p) { return sign(p) ? -(var(p) + 1) : var(p) + 1; }

enum class Status : uint8_t { Sat, Unsat, Interrupted };

struct Budget {
  int64_t max_conflicts = -1;  // -1 = unlimited
  std::chrono::steady_clock::time_point deadline{};
  bool has_deadline = false;
};

struct Stats {
  uint64_t conflicts = 0;
  uint64_t decisions = 0;
  uint64_t propagations = 0;
  uint64_t restarts = 0;
  uint64_t learnts_literals = 0;
};

// Incremental CDCL solver with solving under assumptions: first-UIP
// learning, VSIDS branching, phase saving, Luby restarts, activity-based
// learnt-clause reduction. Clause addition is monotone; deletion is
// emulated by the caller via activation literals. Deterministic: no
// randomized decisions or polarities.
class Solver {
 public:
  Solver();

  Var new_var();
  int num_vars() const { return int(assigns_.size()); }

  // Adds a clause at decision level 0. With preprocessing on (default),
  // the clause is deduplicated, tautologies are dropped, literals false at
  // level 0 are removed and clauses satisfied at level 0 are skipped. An
  // empty clause makes the solver permanently unsatisfiable.
  void add_clause(std::vector<Lit> lits);
  void add_clause(std::initializer_list<Lit> lits) {
    add_clause(std::vector<Lit>(lits));
  }

  // Must be called before the first solve.
  void set_preprocessing(bool on);
  bool preprocessing() const { return preprocess_; }

  // Nonzero seeds pick different (deterministic) initial phases.
  void set_seed(uint64_t seed) { seed_ = seed; }

  Status solve(const std::vector<Lit>& assumptions, const Budget& budget = {});

  // Valid after Status::Sat. Total: unconstrained variables read false.
  bool model_value(Var v) const;
  bool model_value(Lit p) const {
    return model_value(var(p)) ^ sign(p);
  }
  // Valid after Status::Unsat: a subset of the assumptions that is jointly
  // contradicted (empty when the clause set itself is unsatisfiable).
  const std::vector<Lit>& conflict_core() const { return conflict_core_; }

  bool poisoned() const { return !ok_; }

  // Drops learnt clauses satisfied by retired activation units, removes
  // clauses satisfied at level 0 and shrinks false literals; watches are
  // rebuilt. Call between solves only.
  void restart_and_compact();

  // Live original clauses (units included).
  int num_clauses() const { return int(n_original_) + int(unit_count_); }
  int num_learnts() const { return int(n_learnts_); }
  const Stats& stats() const { return stats_; }

  // Current clause set (level-0 units plus live originals) in DIMACS form,
  // preceded by the given comment lines.
  void write_dimacs(std::ostream& os,
                    const std::vector<std::string>& comments) const;

  // True iff the current model satisfies every live original clause.
  bool model_satisfies_originals() const;

  // Test hook: invoked with every learnt clause as it is recorded.
  std::function<void(const std::vector<Lit>&)> debug_on_learnt;

 private:
  using CRef = uint32_t;
  static constexpr CRef CRef_Undef = UINT32_MAX;
  using lbool = uint8_t;
  static constexpr lbool l_True = 0, l_False = 1, l_Undef = 2;

  struct Clause {
    std::vector<Lit> lits;
    double act = 0.0;
    bool learnt = false;
    bool removed = false;
  };
  struct Watcher {
    CRef cref;
    Lit blocker;
  };

  // Max-heap over variable activity; ties break toward the smaller index.
  class OrderHeap {
   public:
    explicit OrderHeap(const std::vector<double>& act) : act_(act) {}
    bool in_heap(Var v) const {
      return v < int(indices_.size()) && indices_[v] >= 0;
    }
    bool empty() const { return heap_.empty(); }
    void insert(Var v);
    void update(Var v);  // activity increased
    Var remove_max();
    void grow(int n) { indices_.resize(size_t(n), -1); }

   private:
    bool lt(Var a, Var b) const {
      if (act_[size_t(a)] != act_[size_t(b)])
        return act_[size_t(a)] > act_[size_t(b)];
      return a < b;
    }
    void up(int i);
    void down(int i);
    const std::vector<double>& act_;
    std::vector<Var> heap_;
    std::vector<int> indices_;
  };

  lbool value(Var v) const { return assigns_[size_t(v)]; }
  lbool value(Lit p) const {
    lbool a = assigns_[size_t(var(p))];
    return a == l_Undef ? l_Undef : lbool(a ^ lbool(sign(p)));
  }
  int level(Var v) const { return level_[size_t(v)]; }
  CRef reason(Var v) const { return reason_[size_t(v)]; }
  int decision_level() const { return int(trail_lim_.size()); }

  void new_decision_level() { trail_lim_.push_back(int(trail_.size())); }
  void unchecked_enqueue(Lit p, CRef from = CRef_Undef);
  CRef propagate();
  void cancel_until(int level);
  void analyze(CRef confl, std::vector<Lit>& out_learnt, int& out_btlevel);
  void analyze_final(Lit p);
  Lit pick_branch_lit();
  Status search(int max_conflicts, const Budget& budget);
  void reduce_db();
  void attach_clause(CRef cref);
  void rebuild_watches();
  bool clause_satisfied_l0(const Clause& c) const;
  void var_bump(Var v);
  void var_decay() { var_inc_ /= 0.95; }
  void cla_bump(Clause& c);
  void cla_decay() { cla_inc_ /= 0.999; }
  static double luby(double y, int i);

  std::vector<Clause> clauses_;
  std::vector<std::vector<Watcher>> watches_;  // indexed by literal
  std::vector<lbool> assigns_;
  std::vector<char> polarity_;  // saved phases
  std::vector<int> level_;
  std::vector<CRef> reason_;
  std::vector<double> activity_;
  std::vector<Lit> trail_;
  std::vector<int> trail_lim_;
  int qhead_ = 0;
  OrderHeap order_{activity_};
  std::vector<char> seen_;

  std::vector<Lit> assumptions_;
  std::vector<lbool> model_;
  std::vector<Lit> conflict_core_;

  bool ok_ = true;
  bool preprocess_ = true;
  bool solved_once_ = false;
  size_t n_original_ = 0;  // live non-unit original clauses
  size_t n_learnts_ = 0;
  size_t unit_count_ = 0;
  std::vector<Lit> unit_clauses_;

  uint64_t seed_ = 0;
  double var_inc_ = 1.0;
  double cla_inc_ = 1.0;
  double reduce_limit_ = 4000;
  Stats stats_;
};

}  // namespace ibmc::sat
