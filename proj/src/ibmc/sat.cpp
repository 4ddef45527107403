#include "sat.hpp"

#include <algorithm>
#include <cassert>
#include <ostream>
#include <stdexcept>

namespace ibmc::sat {

void Solver::OrderHeap::insert(Var v) {
  if (in_heap(v)) return;
  if (v >= int(indices_.size())) indices_.resize(size_t(v) + 1, -1);
  indices_[size_t(v)] = int(heap_.size());
  heap_.push_back(v);
  up(int(heap_.size()) - 1);
}

void Solver::OrderHeap::update(Var v) {
  if (in_heap(v)) up(indices_[size_t(v)]);
}

Var Solver::OrderHeap::remove_max() {
  Var x = heap_[0];
  heap_[0] = heap_.back();
  indices_[size_t(heap_[0])] = 0;
  indices_[size_t(x)] = -1;
  heap_.pop_back();
  if (heap_.size() > 1) down(0);
  return x;
}

void Solver::OrderHeap::up(int i) {
  Var x = heap_[size_t(i)];
  int p = (i - 1) >> 1;
  while (i != 0 && lt(x, heap_[size_t(p)])) {
    heap_[size_t(i)] = heap_[size_t(p)];
    indices_[size_t(heap_[size_t(p)])] = i;
    i = p;
    p = (i - 1) >> 1;
  }
  heap_[size_t(i)] = x;
  indices_[size_t(x)] = i;
}

void Solver::OrderHeap::down(int i) {
  Var x = heap_[size_t(i)];
  int n = int(heap_.size());
  for (;;) {
    int l = 2 * i + 1, r = 2 * i + 2;
    if (l >= n) break;
    int child = (r < n && lt(heap_[size_t(r)], heap_[size_t(l)])) ? r : l;
    if (!lt(heap_[size_t(child)], x)) break;
    heap_[size_t(i)] = heap_[size_t(child)];
    indices_[size_t(heap_[size_t(i)])] = i;
    i = child;
  }
  heap_[size_t(i)] = x;
  indices_[size_t(x)] = i;
}

Solver::Solver() = default;

Var Solver::new_var() {
  Var v = int(assigns_.size());
  assigns_.push_back(l_Undef);
  char phase = 1;  // default phase: false
  if (seed_ != 0) {
    uint64_t x = seed_ ^ (uint64_t(v) * 0x9E3779B97F4A7C15ull);
    x ^= x >> 33;
    x *= 0xFF51AFD7ED558CCDull;
    x ^= x >> 33;
    phase = char(x & 1);
  }
  polarity_.push_back(phase);
  level_.push_back(0);
  reason_.push_back(CRef_Undef);
  activity_.push_back(0.0);
  seen_.push_back(0);
  watches_.emplace_back();
  watches_.emplace_back();
  order_.grow(v + 1);
  order_.insert(v);
  return v;
}

void Solver::set_preprocessing(bool on) {
  if (solved_once_)
    throw std::logic_error("preprocessing toggled after first solve");
  preprocess_ = on;
}

bool Solver::clause_satisfied_l0(const Clause& c) const {
  for (Lit p : c.lits)
    if (value(p) == l_True && level(var(p)) == 0) return true;
  return false;
}

void Solver::add_clause(std::vector<Lit> lits) {
  assert(decision_level() == 0);
  if (!ok_) return;
#ifndef NDEBUG
  for (Lit p : lits) assert(var(p) >= 0 && var(p) < num_vars());
#endif

  if (preprocess_) {
    std::sort(lits.begin(), lits.end());
    std::vector<Lit> out;
    Lit prev = lit_Undef;
    for (Lit p : lits) {
      if (value(p) == l_True && level(var(p)) == 0) return;  // subsumed
      if (p == prev) continue;
      if (prev != lit_Undef && p == ~prev) return;  // tautology
      if (value(p) == l_False && level(var(p)) == 0) {
        prev = p;
        continue;  // falsified at top level
      }
      out.push_back(p);
      prev = p;
    }
    lits = std::move(out);
  }

  if (lits.empty()) {
    ok_ = false;
    return;
  }
  if (lits.size() == 1 ||
      std::all_of(lits.begin(), lits.end(),
                  [&](Lit p) { return p == lits[0]; })) {
    Lit p = lits[0];
    unit_clauses_.push_back(p);
    ++unit_count_;
    if (value(p) == l_False) {
      ok_ = false;
      return;
    }
    if (value(p) == l_Undef) {
      unchecked_enqueue(p);
      if (preprocess_ && propagate() != CRef_Undef) ok_ = false;
    }
    return;
  }

  CRef cref = CRef(clauses_.size());
  Clause c;
  c.lits = std::move(lits);
  clauses_.push_back(std::move(c));
  ++n_original_;
  attach_clause(cref);
}

void Solver::attach_clause(CRef cref) {
  Clause& c = clauses_[cref];
  assert(c.lits.size() >= 2);
  // Watches must not rest on literals already false at level 0.
  int free_slot = 0;
  for (size_t i = 0; i < c.lits.size() && free_slot < 2; ++i) {
    if (!(value(c.lits[i]) == l_False && level(var(c.lits[i])) == 0)) {
      std::swap(c.lits[size_t(free_slot)], c.lits[i]);
      ++free_slot;
    }
  }
  if (free_slot == 0) {
    ok_ = false;
    return;
  }
  if (free_slot == 1) {
    if (value(c.lits[0]) == l_Undef) {
      unchecked_enqueue(c.lits[0], cref);
      if (propagate() != CRef_Undef) ok_ = false;
    }
    // Keep it attached anyway so the DB stays complete.
    if (c.lits.size() < 2) return;
  }
  watches_[size_t(toInt(~c.lits[0]))].push_back(Watcher{cref, c.lits[1]});
  watches_[size_t(toInt(~c.lits[1]))].push_back(Watcher{cref, c.lits[0]});
}

void Solver::unchecked_enqueue(Lit p, CRef from) {
  assert(value(p) == l_Undef);
  assigns_[size_t(var(p))] = lbool(sign(p) ? l_False : l_True);
  level_[size_t(var(p))] = decision_level();
  reason_[size_t(var(p))] = from;
  trail_.push_back(p);
}

Solver::CRef Solver::propagate() {
  CRef confl = CRef_Undef;
  while (qhead_ < int(trail_.size())) {
    Lit p = trail_[size_t(qhead_++)];
    std::vector<Watcher>& ws = watches_[size_t(toInt(p))];
    size_t i = 0, j = 0;
    ++stats_.propagations;
    while (i < ws.size()) {
      Watcher w = ws[i];
      if (value(w.blocker) == l_True) {
        ws[j++] = ws[i++];
        continue;
      }
      Clause& c = clauses_[w.cref];
      if (c.removed) {
        ++i;
        continue;
      }
      Lit false_lit = ~p;
      if (c.lits[0] == false_lit) std::swap(c.lits[0], c.lits[1]);
      ++i;
      Lit first = c.lits[0];
      if (first != w.blocker && value(first) == l_True) {
        ws[j++] = Watcher{w.cref, first};
        continue;
      }
      bool moved = false;
      for (size_t k = 2; k < c.lits.size(); ++k) {
        if (value(c.lits[k]) != l_False) {
          std::swap(c.lits[1], c.lits[k]);
          watches_[size_t(toInt(~c.lits[1]))].push_back(
              Watcher{w.cref, first});
          moved = true;
          break;
        }
      }
      if (moved) continue;
      // Unit or conflict.
      ws[j++] = Watcher{w.cref, first};
      if (value(first) == l_False) {
        confl = w.cref;
        qhead_ = int(trail_.size());
        while (i < ws.size()) ws[j++] = ws[i++];
      } else {
        unchecked_enqueue(first, w.cref);
      }
    }
    ws.resize(j);
    if (confl != CRef_Undef) break;
  }
  return confl;
}

void Solver::cancel_until(int lvl) {
  if (decision_level() <= lvl) return;
  for (int i = int(trail_.size()) - 1; i >= trail_lim_[size_t(lvl)]; --i) {
    Var v = var(trail_[size_t(i)]);
    polarity_[size_t(v)] = char(sign(trail_[size_t(i)]));
    assigns_[size_t(v)] = l_Undef;
    reason_[size_t(v)] = CRef_Undef;
    order_.insert(v);
  }
  qhead_ = trail_lim_[size_t(lvl)];
  trail_.resize(size_t(trail_lim_[size_t(lvl)]));
  trail_lim_.resize(size_t(lvl));
}

void Solver::var_bump(Var v) {
  activity_[size_t(v)] += var_inc_;
  if (activity_[size_t(v)] > 1e100) {
    for (auto& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  order_.update(v);
}

void Solver::cla_bump(Clause& c) {
  c.act += cla_inc_;
  if (c.act > 1e20) {
    for (auto& cl : clauses_)
      if (cl.learnt) cl.act *= 1e-20;
    cla_inc_ *= 1e-20;
  }
}

void Solver::analyze(CRef confl, std::vector<Lit>& out_learnt,
                     int& out_btlevel) {
  int path_c = 0;
  Lit p = lit_Undef;
  out_learnt.clear();
  out_learnt.push_back(lit_Undef);  // slot for the asserting literal
  int index = int(trail_.size()) - 1;
  std::vector<Var> to_clear;

  do {
    assert(confl != CRef_Undef);
    Clause& c = clauses_[confl];
    if (c.learnt) cla_bump(c);
    for (size_t j = (p == lit_Undef) ? 0 : 1; j < c.lits.size(); ++j) {
      Lit q = c.lits[j];
      if (!seen_[size_t(var(q))] && level(var(q)) > 0) {
        var_bump(var(q));
        seen_[size_t(var(q))] = 1;
        to_clear.push_back(var(q));
        if (level(var(q)) >= decision_level())
          ++path_c;
        else
          out_learnt.push_back(q);
      }
    }
    while (!seen_[size_t(var(trail_[size_t(index--)]))]) {}
    p = trail_[size_t(index + 1)];
    confl = reason(var(p));
    seen_[size_t(var(p))] = 0;
    --path_c;
  } while (path_c > 0);
  out_learnt[0] = ~p;

  // Cheap minimization: drop literals implied by the rest of the clause
  // through their reason. Reasons point strictly backwards in the trail,
  // so removed literals cannot justify each other cyclically.
  size_t j = 1;
  for (size_t i = 1; i < out_learnt.size(); ++i) {
    Lit q = out_learnt[i];
    CRef r = reason(var(q));
    bool redundant = false;
    if (r != CRef_Undef) {
      redundant = true;
      for (Lit rl : clauses_[r].lits) {
        if (var(rl) == var(q)) continue;
        if (!seen_[size_t(var(rl))] && level(var(rl)) > 0) {
          redundant = false;
          break;
        }
      }
    }
    if (!redundant) out_learnt[j++] = q;
  }
  out_learnt.resize(j);
  stats_.learnts_literals += out_learnt.size();

  if (out_learnt.size() == 1) {
    out_btlevel = 0;
  } else {
    size_t max_i = 1;
    for (size_t i = 2; i < out_learnt.size(); ++i)
      if (level(var(out_learnt[i])) > level(var(out_learnt[size_t(max_i)])))
        max_i = i;
    std::swap(out_learnt[1], out_learnt[max_i]);
    out_btlevel = level(var(out_learnt[1]));
  }
  for (Var v : to_clear) seen_[size_t(v)] = 0;
}

void Solver::analyze_final(Lit p) {
  conflict_core_.clear();
  conflict_core_.push_back(p);
  if (decision_level() == 0) return;
  seen_[size_t(var(p))] = 1;
  for (int i = int(trail_.size()) - 1; i >= trail_lim_[0]; --i) {
    Var x = var(trail_[size_t(i)]);
    if (!seen_[size_t(x)]) continue;
    if (reason(x) == CRef_Undef) {
      // A decision below the assumption prefix is an assumption.
      conflict_core_.push_back(trail_[size_t(i)]);
    } else {
      for (Lit q : clauses_[reason(x)].lits)
        if (var(q) != x && level(var(q)) > 0) seen_[size_t(var(q))] = 1;
    }
    seen_[size_t(x)] = 0;
  }
  seen_[size_t(var(p))] = 0;
}

Lit Solver::pick_branch_lit() {
  while (!order_.empty()) {
    Var v = order_.remove_max();
    if (value(v) == l_Undef)
      return mkLit(v, polarity_[size_t(v)]);
  }
  return lit_Undef;
}

void Solver::reduce_db() {
  std::vector<CRef> learnt_refs;
  for (CRef i = 0; i < clauses_.size(); ++i)
    if (clauses_[i].learnt && !clauses_[i].removed)
      learnt_refs.push_back(i);
  std::sort(learnt_refs.begin(), learnt_refs.end(), [&](CRef a, CRef b) {
    if (clauses_[a].act != clauses_[b].act)
      return clauses_[a].act < clauses_[b].act;
    return a < b;
  });
  size_t target = learnt_refs.size() / 2;
  size_t removed = 0;
  for (CRef cref : learnt_refs) {
    if (removed >= target) break;
    Clause& c = clauses_[cref];
    if (c.lits.size() <= 2) continue;
    bool locked = false;
    Lit l0 = c.lits[0];
    if (value(l0) == l_True && reason(var(l0)) == cref) locked = true;
    if (locked) continue;
    c.removed = true;
    --n_learnts_;
    ++removed;
  }
  rebuild_watches();
}

void Solver::rebuild_watches() {
  for (auto& w : watches_) w.clear();
  for (CRef i = 0; i < clauses_.size(); ++i) {
    Clause& c = clauses_[i];
    if (c.removed || c.lits.size() < 2) continue;
    watches_[size_t(toInt(~c.lits[0]))].push_back(Watcher{i, c.lits[1]});
    watches_[size_t(toInt(~c.lits[1]))].push_back(Watcher{i, c.lits[0]});
  }
}

double Solver::luby(double y, int i) {
  int size, seq;
  for (size = 1, seq = 0; size < i + 1; ++seq, size = 2 * size + 1) {}
  while (size - 1 != i) {
    size = (size - 1) >> 1;
    --seq;
    i = i % size;
  }
  double r = 1;
  for (int k = 0; k < seq; ++k) r *= y;
  return r;
}

Status Solver::search(int max_conflicts, const Budget& budget) {
  int conflict_c = 0;
  std::vector<Lit> learnt;
  for (;;) {
    CRef confl = propagate();
    if (confl != CRef_Undef) {
      ++stats_.conflicts;
      ++conflict_c;
      if (decision_level() == 0) {
        ok_ = false;
        conflict_core_.clear();
        return Status::Unsat;
      }
      int btlevel = 0;
      analyze(confl, learnt, btlevel);
      if (debug_on_learnt) debug_on_learnt(learnt);
      cancel_until(btlevel);
      if (learnt.size() == 1) {
        unchecked_enqueue(learnt[0]);
      } else {
        CRef cref = CRef(clauses_.size());
        Clause c;
        c.lits = learnt;
        c.learnt = true;
        clauses_.push_back(std::move(c));
        ++n_learnts_;
        cla_bump(clauses_[cref]);
        watches_[size_t(toInt(~learnt[0]))].push_back(
            Watcher{cref, learnt[1]});
        watches_[size_t(toInt(~learnt[1]))].push_back(
            Watcher{cref, learnt[0]});
        unchecked_enqueue(learnt[0], cref);
      }
      var_decay();
      cla_decay();
      if ((stats_.conflicts & 255) == 0 && budget.has_deadline &&
          std::chrono::steady_clock::now() >= budget.deadline)
        return Status::Interrupted;
      if (budget.max_conflicts >= 0 &&
          int64_t(stats_.conflicts) >= budget.max_conflicts)
        return Status::Interrupted;
    } else {
      if (conflict_c >= max_conflicts) {
        cancel_until(0);
        ++stats_.restarts;
        return Status::Interrupted;  // caller treats as restart
      }
      if (int(n_learnts_) > int(reduce_limit_)) {
        reduce_db();
        reduce_limit_ *= 1.3;
      }
      Lit next = lit_Undef;
      while (decision_level() < int(assumptions_.size())) {
        Lit p = assumptions_[size_t(decision_level())];
        if (value(p) == l_True) {
          new_decision_level();
        } else if (value(p) == l_False) {
          analyze_final(p);
          return Status::Unsat;
        } else {
          next = p;
          break;
        }
      }
      if (next == lit_Undef) {
        ++stats_.decisions;
        next = pick_branch_lit();
        if (next == lit_Undef) return Status::Sat;
      }
      new_decision_level();
      unchecked_enqueue(next);
    }
  }
}

Status Solver::solve(const std::vector<Lit>& assumptions,
                     const Budget& budget) {
  solved_once_ = true;
  conflict_core_.clear();
  if (!ok_) return Status::Unsat;
  assumptions_ = assumptions;

  Budget b = budget;
  if (b.max_conflicts >= 0) b.max_conflicts += int64_t(stats_.conflicts);

  Status st = Status::Interrupted;
  for (int restarts = 0;; ++restarts) {
    int grow = int(100 * luby(2.0, restarts));
    st = search(grow, b);
    if (st == Status::Sat || st == Status::Unsat) break;
    if (b.has_deadline && std::chrono::steady_clock::now() >= b.deadline)
      break;
    if (b.max_conflicts >= 0 && int64_t(stats_.conflicts) >= b.max_conflicts)
      break;
  }
  if (st == Status::Sat) {
    model_ = assigns_;
    assert(model_satisfies_originals());
  }
  cancel_until(0);
  return st;
}

bool Solver::model_value(Var v) const {
  if (v < 0 || size_t(v) >= model_.size()) return false;
  return model_[size_t(v)] == l_True;
}

bool Solver::model_satisfies_originals() const {
  auto lit_true = [&](Lit p) {
    if (model_.empty() || model_[size_t(var(p))] == l_Undef)
      return sign(p);  // unassigned vars read false
    return (model_[size_t(var(p))] ^ lbool(sign(p))) == l_True;
  };
  for (Lit u : unit_clauses_)
    if (!lit_true(u)) return false;
  for (const Clause& c : clauses_) {
    if (c.learnt || c.removed) continue;
    bool satisfied = false;
    for (Lit p : c.lits)
      if (lit_true(p)) {
        satisfied = true;
        break;
      }
    if (!satisfied) return false;
  }
  return true;
}

void Solver::restart_and_compact() {
  assert(decision_level() == 0);
  if (!ok_) return;
  for (CRef i = 0; i < clauses_.size(); ++i) {
    Clause& c = clauses_[i];
    if (c.removed) continue;
    if (clause_satisfied_l0(c)) {
      // Retired activation units land here: the group they guard is
      // permanently satisfied and drops out.
      c.removed = true;
      if (c.learnt)
        --n_learnts_;
      else
        --n_original_;
      continue;
    }
    size_t j = 0;
    for (size_t k = 0; k < c.lits.size(); ++k) {
      Lit p = c.lits[k];
      if (value(p) == l_False && level(var(p)) == 0) continue;
      c.lits[j++] = p;
    }
    c.lits.resize(j);
    assert(!c.lits.empty());
    if (c.lits.size() == 1) {
      // Became unit; move it to the trail and retire the stored clause.
      if (value(c.lits[0]) == l_Undef) unchecked_enqueue(c.lits[0]);
      if (!c.learnt) {
        unit_clauses_.push_back(c.lits[0]);
        ++unit_count_;
        --n_original_;
      } else {
        --n_learnts_;
      }
      c.removed = true;
    }
  }
  for (size_t v = 0; v < assigns_.size(); ++v)
    if (assigns_[v] != l_Undef) reason_[v] = CRef_Undef;
  rebuild_watches();
  qhead_ = 0;
  if (propagate() != CRef_Undef) ok_ = false;
}

void Solver::write_dimacs(std::ostream& os,
                          const std::vector<std::string>& comments) const {
  size_t n = 0;
  for (const Clause& c : clauses_)
    if (!c.learnt && !c.removed) ++n;
  std::vector<Lit> units;
  for (size_t v = 0; v < assigns_.size(); ++v)
    if (assigns_[v] != l_Undef && level_[v] == 0)
      units.push_back(mkLit(Var(v), assigns_[v] == l_False));
  for (const auto& cm : comments) os << "c " << cm << "\n";
  os << "p cnf " << num_vars() << " " << (n + units.size()) << "\n";
  for (Lit u : units) os << toDimacs(u) << " 0\n";
  for (const Clause& c : clauses_) {
    if (c.learnt || c.removed) continue;
    for (Lit p : c.lits) os << toDimacs(p) << " ";
    os << "0\n";
  }
}

}  // namespace ibmc::sat
