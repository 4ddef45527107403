#include "engine.hpp"

#include <sys/resource.h>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <memory>

#include "frontend.hpp"
#include "interp.hpp"
#include "slicer.hpp"

namespace ibmc {

namespace {

using Clock = std::chrono::steady_clock;
using sat::Lit;
using sat::lit_Undef;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

uint64_t peak_rss_kb() {
  struct rusage ru;
  getrusage(RUSAGE_SELF, &ru);
  return uint64_t(ru.ru_maxrss);
}

// One verification instance: session + solver + encoder + slicer + the
// activation ledger. Used by every driver; non-incremental drivers build
// a fresh one per solve.
class Job {
 public:
  enum class Mode { Bmc, BaseCase, StepCase };

  Job(const Program& p, const EngineOptions& o, const std::string& loop_id,
      Mode mode, bool use_alpha, RunStats& stats, sat::Budget budget)
      : p_(p), o_(o), mode_(mode), use_alpha_(use_alpha), stats_(stats),
        budget_(budget), slicer_(o.slice) {
    solver_ = std::make_unique<sat::Solver>();
    solver_->set_seed(o.seed);
    solver_->set_preprocessing(o.sat_preprocess);
    sess_ = std::make_unique<UnwindingSession>(p, loop_id, o.const_prop);
    enc_ = std::make_unique<Encoder>(*sess_, *solver_, o.refine);
  }

  void setup_step_case() {
    sess_->havoc_state();
    const LoopDef* loop = p_.find_loop(sess_->program().loops
                                           [size_t(sess_->loop_index())].id);
    sess_->emit_entry_assumption(tail_stable_asserts(p_, loop->body));
  }

  void switch_loop(const std::string& id) { sess_->switch_loop(id); }

  // Unwinds the next frame and encodes its slice increment; solves Φ(k)
  // when do_solve is set. In BaseCase mode, frames left unsolved get
  // their atoms forced false immediately (non-incremental rebuilds).
  sat::Status advance(bool do_solve = true) {
    ++k_;
    const TimeframeFormula& f = sess_->unwind_step();

    std::vector<int> new_ids;
    std::vector<PropertyAtom> new_atoms;
    if (k_ == 0) {
      new_ids = sess_->init_frame().eq_ids;
      if (mode_ != Mode::StepCase)
        new_atoms = sess_->init_frame().atoms;
    }
    new_ids.insert(new_ids.end(), f.eq_ids.begin(), f.eq_ids.end());
    new_atoms.insert(new_atoms.end(), f.atoms.begin(), f.atoms.end());

    std::vector<int> increment =
        slicer_.slice_increment(*sess_, new_ids, new_atoms);
    flush_deferred_assumes();
    encode_increment(increment);
    initial_refine_encode();

    if (mode_ != Mode::Bmc) {
      std::vector<Lit> frame_lits;
      for (const PropertyAtom& a : new_atoms)
        frame_lits.push_back(enc_->atom_lit(a));
      cur_self_ = enc_->encode_or_selector(frame_lits);
      if (!do_solve) {
        // Rebuilt base/step cases assume earlier copies violation-free.
        enc_->add_clause({~cur_self_});
        return sat::Status::Unsat;
      }
    }
    if (!do_solve) return sat::Status::Unsat;

    std::vector<Lit> atom_lits;
    for (const PropertyAtom& a : atoms_for_solve())
      atom_lits.push_back(enc_->atom_lit(a));
    uint64_t before = enc_->clauses_added();
    alpha_ = use_alpha_ ? enc_->fresh_lit() : enc_->lit_false();
    sel_ = enc_->encode_property_selector(atom_lits, alpha_);
    group_clauses_[k_] = enc_->clauses_added() - before;

    ++stats_.property_solves;
    return solve_validated();
  }

  // Retires alpha_k (emulating deletion of its property group); when
  // force_frame_atoms_false is set, the current frame's atoms become
  // permanent constraints (k-induction's ¬ψ conjuncts).
  void retire_frame(bool force_frame_atoms_false) {
    if (use_alpha_) {
      solver_->add_clause({alpha_});
      garbage_ += group_clauses_[k_];
    }
    if (force_frame_atoms_false && mode_ != Mode::Bmc)
      enc_->add_clause({~cur_self_});
    maybe_compact();
  }

  UnwindingSession& session() { return *sess_; }
  Encoder& encoder() { return *enc_; }
  sat::Solver& solver() { return *solver_; }
  int frame() const { return k_; }

 private:
  std::vector<PropertyAtom> atoms_for_solve() const {
    std::vector<PropertyAtom> out;
    for (const PropertyAtom& a : sess_->atoms_through(k_)) {
      if (mode_ == Mode::StepCase &&
          sess_->equations()[size_t(a.eq_id)].frame < 0)
        continue;  // init-block asserts belong to the base case
      out.push_back(a);
    }
    return out;
  }

  void encode_increment(const std::vector<int>& ids) {
    uint64_t before = enc_->clauses_added();
    for (int id : ids) {
      const GuardedEquation& eq = sess_->equations()[size_t(id)];
      int solve_frame = std::max(eq.frame, 0);
      if (eq.kind == EqKind::Assume && solve_frame >= k_) {
        // Hard path constraints join the formula after their own frame's
        // solve; until then they act through atom guards only.
        deferred_assumes_.emplace_back(id, solve_frame);
        continue;
      }
      enc_->encode_equation(id);
    }
    stats_.clauses_encoded_total += enc_->clauses_added() - before;
  }

  void flush_deferred_assumes() {
    uint64_t before = enc_->clauses_added();
    std::vector<std::pair<int, int>> keep;
    for (auto [id, sf] : deferred_assumes_) {
      if (sf < k_)
        enc_->encode_equation(id);
      else
        keep.emplace_back(id, sf);
    }
    deferred_assumes_ = std::move(keep);
    stats_.clauses_encoded_total += enc_->clauses_added() - before;
  }

  void initial_refine_encode() {
    auto& sites = enc_->refine_sites();
    uint64_t before = enc_->clauses_added();
    for (size_t i = refine_watermark_; i < sites.size(); ++i) {
      auto& site = sites[i];
      unsigned w = site.type.width;
      unsigned b0 = std::max(4u, w / 4);
      if (b0 >= w) {
        enc_->encode_exact(site);
        continue;
      }
      Lit beta = enc_->fresh_lit();
      int added = o_.refine == Encoder::RefineMode::Under
                      ? enc_->encode_under_approx(site, b0, beta)
                      : enc_->encode_over_approx(site, b0, beta);
      site_clauses_[site.eq_id] = uint64_t(added);
    }
    refine_watermark_ = sites.size();
    stats_.clauses_encoded_total += enc_->clauses_added() - before;
  }

  void refine_site(Encoder::RefineSite& site) {
    solver_->add_clause({site.beta});  // retire the old approximation
    garbage_ += site_clauses_[site.eq_id];
    unsigned w = site.type.width;
    unsigned next = site.op == BinOp::Mul ? std::min(2 * site.bits, w) : w;
    if (o_.refine == Encoder::RefineMode::Under)
      next = std::min(2 * site.bits, w);
    uint64_t before = enc_->clauses_added();
    if (next >= w) {
      enc_->encode_exact(site);
    } else {
      Lit beta = enc_->fresh_lit();
      int added = o_.refine == Encoder::RefineMode::Under
                      ? enc_->encode_under_approx(site, next, beta)
                      : enc_->encode_over_approx(site, next, beta);
      site_clauses_[site.eq_id] = uint64_t(added);
    }
    stats_.clauses_encoded_total += enc_->clauses_added() - before;
  }

  std::vector<size_t> check_bv_sites() {
    std::vector<size_t> bad;
    auto& sites = enc_->refine_sites();
    for (size_t i = 0; i < sites.size(); ++i) {
      const auto& s = sites[i];
      if (s.exact) continue;
      uint64_t va = enc_->model_of_ref(s.a);
      uint64_t vb = enc_->model_of_ref(s.b);
      uint64_t vr = enc_->model_of_name(s.result);
      if (vr != bv::eval_binop(s.op, s.type, va, vb)) bad.push_back(i);
    }
    return bad;
  }

  // Model-guided functional-consistency check; adds the violated lazy
  // constraint instances and returns how many were added.
  int check_arrays();

  sat::Status solve_validated() {
    int ell = 0;
    for (;;) {
      std::vector<Lit> assumps;
      if (use_alpha_) assumps.push_back(~alpha_);
      for (const auto& s : enc_->refine_sites())
        if (!s.exact && s.beta != lit_Undef) assumps.push_back(~s.beta);

      Clock::time_point t0 = Clock::now();
      sat::Status st = solver_->solve(assumps, budget_);
      double dt = ms_since(t0);
      ++stats_.total_solves;
      stats_.solve_ms += dt;
      stats_.calls.push_back(SolveCall{k_, ell,
                                       uint64_t(solver_->num_clauses()),
                                       uint64_t(solver_->num_vars()), dt});
      stats_.clauses_final = uint64_t(solver_->num_clauses());
      stats_.vars_final = uint64_t(solver_->num_vars());
      dump_dimacs(ell);

      if (st == sat::Status::Interrupted) return st;
      if (st == sat::Status::Unsat) {
        if (o_.refine == Encoder::RefineMode::Under) {
          std::vector<size_t> grow;
          auto& sites = enc_->refine_sites();
          for (Lit c : solver_->conflict_core())
            for (size_t i = 0; i < sites.size(); ++i)
              if (!sites[i].exact && c == ~sites[i].beta) grow.push_back(i);
          if (!grow.empty()) {
            for (size_t i : grow) refine_site(sites[i]);
            ++stats_.refinement_rounds;
            ++ell;
            continue;
          }
        } else if (o_.refine == Encoder::RefineMode::Over) {
          for (const auto& s : enc_->refine_sites())
            if (!s.exact) {
              ++stats_.over_unsat_shortcircuits;
              break;
            }
        }
        return st;
      }

      int lemmas = check_arrays();
      std::vector<size_t> bad = check_bv_sites();
      if (lemmas == 0 && bad.empty()) return st;
      auto& sites = enc_->refine_sites();
      for (size_t i : bad) refine_site(sites[i]);
      if (!bad.empty()) ++stats_.refinement_rounds;
      ++ell;
    }
  }

  void maybe_compact() {
    if (o_.compact == EngineOptions::Compact::Never) return;
    uint64_t live = uint64_t(solver_->num_clauses());
    bool due = o_.compact == EngineOptions::Compact::Always ||
               (live > 256 && garbage_ * 4 > live);
    if (due) {
      solver_->restart_and_compact();
      garbage_ = 0;
      ++stats_.compactions;
    }
  }

  void dump_dimacs(int ell) {
    if (o_.dump_dimacs.empty()) return;
    std::ofstream os(o_.dump_dimacs, std::ios::trunc);
    solver_->write_dimacs(
        os, {"step k=" + std::to_string(k_) + " ell=" + std::to_string(ell)});
  }

  const Program& p_;
  const EngineOptions& o_;
  Mode mode_;
  bool use_alpha_;
  RunStats& stats_;
  sat::Budget budget_;
  std::unique_ptr<sat::Solver> solver_;
  std::unique_ptr<UnwindingSession> sess_;
  std::unique_ptr<Encoder> enc_;
  Slicer slicer_;

  int k_ = -1;
  Lit alpha_ = lit_Undef;
  Lit sel_ = lit_Undef;
  Lit cur_self_ = lit_Undef;
  std::vector<std::pair<int, int>> deferred_assumes_;
  size_t refine_watermark_ = 0;
  uint64_t garbage_ = 0;
  std::map<int, uint64_t> group_clauses_;
  std::map<int, uint64_t> site_clauses_;
  std::map<std::pair<int, int>, Lit> skip_cache_;
};

int Job::check_arrays() {
  const auto& stores = enc_->stores();
  const auto& selects = enc_->selects();
  if (selects.empty()) return 0;

  std::map<uint64_t, const Encoder::StoreInst*> store_of;
  for (const auto& st : stores) store_of[st.version.key()] = &st;

  struct Resolved {
    const Encoder::SelectInst* sel;
    uint64_t base_key;
    SsaName base;
    uint64_t idx_val;
    std::vector<Lit> skips;  // literals true in the model justifying skips
  };
  std::vector<Resolved> resolved;

  int added = 0;
  auto skip_lit = [&](const Encoder::StoreInst& st,
                      const Encoder::SelectInst& sel) {
    auto key = std::make_pair(st.eq_id, sel.eq_id);
    auto it = skip_cache_.find(key);
    if (it != skip_cache_.end()) return it->second;
    // (store inactive) or (indices differ)
    Lit eqi = enc_->value_eq_lit(st.index, sel.index);
    Lit g = st.guard;
    Lit d;
    if (g == enc_->lit_true()) {
      d = ~eqi;
    } else {
      // d <-> (~g | ~eqi)
      d = enc_->fresh_lit();
      enc_->add_clause({~d, ~g, ~eqi});
      enc_->add_clause({d, g});
      enc_->add_clause({d, eqi});
    }
    skip_cache_[key] = d;
    return d;
  };

  for (const auto& sel : selects) {
    uint64_t idx_val = enc_->model_of_ref(sel.index);
    uint64_t res_val = enc_->model_of_name(sel.result);
    SsaName v = sel.version;
    std::vector<Lit> skips;
    bool lemma_added = false;
    for (;;) {
      auto it = store_of.find(v.key());
      if (it == store_of.end()) break;  // base version reached
      const Encoder::StoreInst& st = *it->second;
      bool active = solver_->model_value(st.guard);
      uint64_t st_idx = enc_->model_of_ref(st.index);
      if (active && st_idx == idx_val) {
        uint64_t st_val = enc_->model_of_ref(st.value);
        if (res_val != st_val) {
          // skips /\ guard /\ idx-equal ==> result = stored value
          std::vector<Lit> cl;
          for (Lit s : skips) cl.push_back(~s);
          if (st.guard != enc_->lit_true()) cl.push_back(~st.guard);
          cl.push_back(~enc_->value_eq_lit(st.index, sel.index));
          cl.push_back(enc_->vec_eq_lit(enc_->lits_of(sel.result),
                                        enc_->enc_expr(st.value)));
          enc_->add_clause(std::move(cl));
          ++added;
          lemma_added = true;
        }
        break;
      }
      skips.push_back(skip_lit(st, sel));
      v = st.prev;
    }
    if (lemma_added) continue;
    if (!store_of.count(v.key())) {
      // Resolved to a base version.
      if (auto contents = sess_->array_contents(v)) {
        if (res_val != bv::trunc(*contents,
                                 sess_->name_type(sel.result).width)) {
          std::vector<Lit> cl;
          for (Lit s : skips) cl.push_back(~s);
          Type et = sess_->name_type(sel.result);
          std::vector<Lit> cbits;
          for (unsigned i = 0; i < et.width; ++i)
            cbits.push_back(((*contents >> i) & 1) ? enc_->lit_true()
                                                   : enc_->lit_false());
          cl.push_back(enc_->vec_eq_lit(enc_->lits_of(sel.result), cbits));
          enc_->add_clause(std::move(cl));
          ++added;
        }
      } else {
        resolved.push_back(Resolved{&sel, v.key(), v, idx_val,
                                    std::move(skips)});
      }
    }
  }

  // Unconstrained bases: selects reaching the same base cell must agree.
  std::map<std::pair<uint64_t, uint64_t>, size_t> canon;
  for (size_t i = 0; i < resolved.size(); ++i) {
    auto key = std::make_pair(resolved[i].base_key, resolved[i].idx_val);
    auto it = canon.find(key);
    if (it == canon.end()) {
      canon[key] = i;
      continue;
    }
    const Resolved& a = resolved[it->second];
    const Resolved& b = resolved[i];
    uint64_t va = enc_->model_of_name(a.sel->result);
    uint64_t vb = enc_->model_of_name(b.sel->result);
    if (va == vb) continue;
    std::vector<Lit> cl;
    for (Lit s : a.skips) cl.push_back(~s);
    for (Lit s : b.skips) cl.push_back(~s);
    cl.push_back(~enc_->value_eq_lit(a.sel->index, b.sel->index));
    cl.push_back(enc_->vec_eq_lit(enc_->lits_of(a.sel->result),
                                  enc_->lits_of(b.sel->result)));
    enc_->add_clause(std::move(cl));
    ++added;
  }

  stats_.array_lemmas += uint64_t(added);
  return added;
}

// Reads the counterexample off the model, recomputing sliced-away values
// with the concrete interpreter, and verifies the replay reproduces the
// violation.
Trace extract_trace(Job& job, int upto_frame) {
  UnwindingSession& sess = job.session();
  Encoder& enc = job.encoder();
  const Program& p = sess.program();

  // The violated atom: model-true; forced false for every earlier frame.
  PropertyAtom hit;
  bool found = false;
  for (const PropertyAtom& a : sess.atoms_through(upto_frame)) {
    if (enc.name_encoded(a.name) && enc.model_of_name(a.name)) {
      hit = a;
      found = true;
      break;
    }
  }
  if (!found) throw std::logic_error("SAT model without a true property atom");

  Trace tr;
  tr.violated_assert = hit.assert_id;
  tr.violated_step = hit.solve_frame;
  bool init_violation = sess.equations()[size_t(hit.eq_id)].frame < 0;

  auto draws_from = [&](const TimeframeFormula& f) {
    std::map<int, uint64_t> by_site;
    for (const auto& [site, name] : f.nondet_names)
      by_site[site] = enc.model_of_name(name);
    return [by_site](int site) {
      auto it = by_site.find(site);
      return it == by_site.end() ? 0 : it->second;
    };
  };

  Interpreter interp(p);
  ExecResult st = interp.run_init(draws_from(sess.init_frame()));
  if (init_violation &&
      std::find(st.violations.begin(), st.violations.end(),
                hit.assert_id) == st.violations.end())
    throw std::logic_error("trace replay missed the init violation");

  auto state_row = [&](const ConcreteState& cs) {
    std::vector<std::pair<std::string, int64_t>> out;
    for (const auto& [name, v] : cs.scalars) {
      const VarInfo& vi = p.var(name);
      if (vi.kind != VarKind::State) continue;
      out.emplace_back(name, vi.type.is_signed()
                                 ? bv::to_signed(v, vi.type.width)
                                 : int64_t(bv::trunc(v, vi.type.width)));
    }
    return out;
  };

  for (int j = 0; j <= upto_frame; ++j) {
    const TimeframeFormula& f = sess.frame(j);
    TraceRow row;
    row.step = j;
    row.loop_index = f.loop_index;
    row.state = state_row(st.state);

    std::map<std::string, uint64_t> inputs;
    for (const auto& d : p.decls) {
      if (d.kind != VarKind::Input) continue;
      uint64_t v = 0;
      for (const auto& [base, name] : f.input_names)
        if (sess.base_str(base) == d.name) v = enc.model_of_name(name);
      inputs[d.name] = bv::trunc(v, d.type.width);
      row.inputs.emplace_back(
          d.name, d.type.is_signed() ? bv::to_signed(v, d.type.width)
                                     : int64_t(bv::trunc(v, d.type.width)));
    }
    for (const auto& [site, name] : f.nondet_names)
      row.inputs.emplace_back("nondet#" + std::to_string(site),
                              int64_t(enc.model_of_name(name)));
    tr.rows.push_back(std::move(row));

    ExecResult next = interp.step(st.state,
                                  p.loops[size_t(f.loop_index)].body, inputs,
                                  draws_from(f));
    if (j == tr.violated_step && !init_violation) {
      if (std::find(next.violations.begin(), next.violations.end(),
                    hit.assert_id) == next.violations.end())
        throw std::logic_error("trace replay missed the violation");
    }
    st = std::move(next);
  }
  return tr;
}

struct Driver {
  const Program& p;
  const EngineOptions& o;
  RunStats stats;
  Clock::time_point t_start = Clock::now();
  sat::Budget budget;
  std::vector<std::string> schedule;

  Driver(const Program& p_, const EngineOptions& o_) : p(p_), o(o_) {
    if (o.timeout_s) {
      budget.has_deadline = true;
      budget.deadline =
          Clock::now() + std::chrono::duration_cast<Clock::duration>(
                             std::chrono::duration<double>(*o.timeout_s));
    }
    if (!o.loop_id.empty()) {
      schedule.push_back(o.loop_id);
    } else {
      for (const auto& l : p.loops) schedule.push_back(l.id);
    }
    if (schedule.size() > 1 && !o.unwind_max)
      throw UsageError("programs with several loops need --unwind-max");
    if (o.kinduction && schedule.size() != 1)
      throw UsageError("k-induction needs a single unbounded loop");
  }

  bool out_of_time() const {
    return budget.has_deadline && Clock::now() >= budget.deadline;
  }

  RunResult finish(Verdict v) {
    stats.wall_ms = ms_since(t_start);
    stats.peak_mem_kb = peak_rss_kb();
    if (v.kind == Verdict::Kind::Counterexample ||
        v.kind == Verdict::Kind::BoundedSafe)
      stats.depth_reached = v.depth;
    return RunResult{std::move(v), std::move(stats)};
  }

  Verdict resource(const std::string& what) {
    return Verdict{Verdict::Kind::Resource, -1, std::nullopt, what};
  }

  RunResult run() {
    if (o.kinduction)
      return finish(o.incremental ? kinduction_inc() : kinduction_ni());
    return finish(o.incremental ? bmc_inc() : bmc_ni());
  }

  Verdict bmc_inc() {
    Job job(p, o, schedule[0], Job::Mode::Bmc, /*use_alpha=*/true, stats,
            budget);
    int kmax = o.unwind_max ? *o.unwind_max : -1;
    for (size_t li = 0; li < schedule.size(); ++li) {
      if (li > 0) job.switch_loop(schedule[li]);
      for (int local = 0; kmax < 0 || local <= kmax; ++local) {
        if (out_of_time()) return resource("timeout");
        sat::Status st = job.advance();
        if (st == sat::Status::Interrupted) return resource("timeout");
        if (st == sat::Status::Sat) {
          if (o.stop_when_unsat) {
            job.retire_frame(false);
            continue;
          }
          Trace tr = extract_trace(job, job.frame());
          return Verdict{Verdict::Kind::Counterexample, local,
                         std::move(tr), ""};
        }
        if (o.stop_when_unsat)
          return Verdict{Verdict::Kind::BoundedSafe, local, std::nullopt,
                         "stop-when-unsat: first UNSAT depth"};
        job.retire_frame(false);
      }
    }
    return Verdict{Verdict::Kind::BoundedSafe,
                   o.unwind_max ? *o.unwind_max : -1, std::nullopt, ""};
  }

  // A fresh session, solver and encoding per depth, per the basic
  // while-true BMC loop.
  Verdict bmc_ni() {
    int kmax = o.unwind_max ? *o.unwind_max : -1;
    for (size_t li = 0; li < schedule.size(); ++li) {
      for (int local = 0; kmax < 0 || local <= kmax; ++local) {
        if (out_of_time()) return resource("timeout");
        Job job(p, o, schedule[0], Job::Mode::Bmc, /*use_alpha=*/false,
                stats, budget);
        for (size_t lj = 0; lj < li; ++lj) {
          for (int t = 0; t <= kmax; ++t) job.advance(false);
          job.switch_loop(schedule[lj + 1]);
        }
        for (int t = 0; t < local; ++t) job.advance(false);
        sat::Status st = job.advance(true);
        if (st == sat::Status::Interrupted) return resource("timeout");
        if (st == sat::Status::Sat) {
          if (!o.stop_when_unsat) {
            Trace tr = extract_trace(job, job.frame());
            return Verdict{Verdict::Kind::Counterexample, local,
                           std::move(tr), ""};
          }
        } else if (o.stop_when_unsat) {
          return Verdict{Verdict::Kind::BoundedSafe, local, std::nullopt,
                         "stop-when-unsat: first UNSAT depth"};
        }
      }
    }
    return Verdict{Verdict::Kind::BoundedSafe,
                   o.unwind_max ? *o.unwind_max : -1, std::nullopt, ""};
  }

  Verdict kinduction_inc() {
    Job bc(p, o, schedule[0], Job::Mode::BaseCase, true, stats, budget);
    Job sc(p, o, schedule[0], Job::Mode::StepCase, true, stats, budget);
    sc.setup_step_case();
    int kmax = o.unwind_max ? *o.unwind_max : -1;
    for (int r = 1; kmax < 0 || r - 1 <= kmax; ++r) {
      if (out_of_time()) return resource("timeout");
      sat::Status st = bc.advance();
      if (st == sat::Status::Interrupted) return resource("timeout");
      if (st == sat::Status::Sat) {
        Trace tr = extract_trace(bc, bc.frame());
        return Verdict{Verdict::Kind::Counterexample, r - 1, std::move(tr),
                       ""};
      }
      bc.retire_frame(true);

      st = sc.advance();
      if (st == sat::Status::Interrupted) return resource("timeout");
      if (st == sat::Status::Unsat)
        return Verdict{Verdict::Kind::Proved, r, std::nullopt, ""};
      sc.retire_frame(true);
    }
    return Verdict{Verdict::Kind::BoundedSafe, kmax, std::nullopt,
                   "k-induction inconclusive at bound"};
  }

  Verdict kinduction_ni() {
    int kmax = o.unwind_max ? *o.unwind_max : -1;
    for (int r = 1; kmax < 0 || r - 1 <= kmax; ++r) {
      if (out_of_time()) return resource("timeout");
      Job bc(p, o, schedule[0], Job::Mode::BaseCase, false, stats, budget);
      for (int t = 0; t < r - 1; ++t) bc.advance(false);
      sat::Status st = bc.advance(true);
      if (st == sat::Status::Interrupted) return resource("timeout");
      if (st == sat::Status::Sat) {
        Trace tr = extract_trace(bc, bc.frame());
        return Verdict{Verdict::Kind::Counterexample, r - 1, std::move(tr),
                       ""};
      }

      Job sc(p, o, schedule[0], Job::Mode::StepCase, false, stats, budget);
      sc.setup_step_case();
      for (int t = 0; t < r - 1; ++t) sc.advance(false);
      st = sc.advance(true);
      if (st == sat::Status::Interrupted) return resource("timeout");
      if (st == sat::Status::Unsat)
        return Verdict{Verdict::Kind::Proved, r, std::nullopt, ""};
    }
    return Verdict{Verdict::Kind::BoundedSafe, kmax, std::nullopt,
                   "k-induction inconclusive at bound"};
  }
};

}  // namespace

RunResult run_verification(const Program& p, const EngineOptions& opts) {
  Driver d(p, opts);
  return d.run();
}

std::string verdict_kind_str(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::Counterexample: return "counterexample";
    case Verdict::Kind::BoundedSafe: return "bounded_safe";
    case Verdict::Kind::Proved: return "proved";
    case Verdict::Kind::Resource: return "resource_limit";
  }
  return "?";
}

}  // namespace ibmc
