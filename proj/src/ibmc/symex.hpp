#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "ast.hpp"
#include "frontend.hpp"
#include "ssa.hpp"

namespace ibmc {

// Incremental symbolic execution of one reactive program: unwinds the
// target unbounded loop one iteration at a time into guarded SSA
// equations, with constant propagation and infeasible-branch pruning.
// Single-owner; not shareable across threads.
class UnwindingSession {
 public:
  // Emits the initial frame (state initializers and init block).
  UnwindingSession(const Program& p, const std::string& loop_id,
                   bool const_prop = true);

  // Rebinds every variable modified in the target loop to a fresh
  // unconstrained name. Only legal before the first unwind_step.
  void havoc_state();

  // Assumes the given state predicates on the current frame-0 bindings
  // (k-induction entry assumption). Call after havoc_state.
  void emit_entry_assumption(const std::vector<EntryAssert>& entry);

  // Executes one loop iteration symbolically and returns its frame.
  const TimeframeFormula& unwind_step();

  // Continues unwinding into another unbounded loop, keeping the current
  // boundary as its entry state (multi-loop schedules).
  void switch_loop(const std::string& loop_id);

  int depth() const { return int(frames_.size()); }
  const Program& program() const { return p_; }
  int loop_index() const { return loop_index_; }

  const std::vector<GuardedEquation>& equations() const { return eqs_; }
  const TimeframeFormula& init_frame() const { return init_frame_; }
  const std::vector<TimeframeFormula>& frames() const { return frames_; }
  const TimeframeFormula& frame(int k) const { return frames_.at(size_t(k)); }

  // All property atoms of solve frames 0..k (init atoms included in 0).
  std::vector<PropertyAtom> atoms_through(int k) const;

  const SNode& node(SRef r) const { return arena_[size_t(r)]; }
  Type name_type(const SsaName& n) const { return bases_[size_t(n.base)].type; }
  std::string base_str(int base) const { return bases_[size_t(base)].name; }
  std::string name_str(const SsaName& n) const;
  std::string expr_str(SRef r) const;

  // Names with no defining equation (inputs, nondet, havoc) get free
  // CNF variables.
  bool is_source(const SsaName& n) const {
    return !defined_.count(n.key());
  }
  // Broadcast contents of a concrete array base version, if known.
  std::optional<uint64_t> array_contents(const SsaName& version) const {
    auto it = array_contents_.find(version.key());
    if (it == array_contents_.end()) return std::nullopt;
    return it->second;
  }

  int base_of(const std::string& var_name) const {
    return var_base_.at(var_name);
  }
  std::optional<SsaName> init_binding(int base) const;

  std::string dump_ssa() const;

 private:
  struct BaseInfo {
    std::string name;
    Type type;
  };

  int register_base(const std::string& name, Type t);
  SsaName fresh_name(int base, int step);
  SsaName fresh_temp(const std::string& prefix, Type t, int step);

  SRef mk_const(Type t, uint64_t v);
  SRef mk_name(const SsaName& n);
  SRef mk_unary(UnOp op, SRef a);
  SRef mk_binary(BinOp op, SRef a, SRef b);
  SRef mk_ternary(SRef c, SRef a, SRef b);
  SRef mk_cast(Type to, SRef a);
  SRef mk_not(SRef a) { return mk_unary(UnOp::Not, a); }
  SRef mk_and(SRef a, SRef b);
  std::optional<uint64_t> const_of(SRef r) const;

  SRef lift(SRef r, Type t);  // names/consts pass through
  int emit(GuardedEquation eq);
  void collect_reads(SRef r, std::vector<SsaName>& out) const;

  SRef symexpr(const Expr& e);
  SRef read_var(int base, Type t);
  SRef read_input(int base, Type t);
  void exec_block(const Block& b);
  void exec_stmt(const Stmt& s);
  void do_assign(int base, Type t, SRef value);
  SRef current_guard();

  void snapshot_boundary(TimeframeFormula& f) const;

  const Program& p_;
  bool const_prop_;

  std::vector<BaseInfo> bases_;
  std::map<std::string, int> var_base_;
  std::vector<SNode> arena_;
  std::vector<GuardedEquation> eqs_;

  std::map<int, SsaName> env_;  // base -> current binding
  std::unordered_map<uint64_t, uint64_t> const_store_;
  std::set<uint64_t> defined_;
  std::unordered_map<uint64_t, uint64_t> array_contents_;
  std::map<int64_t, int> ver_counter_;  // (base, step) -> next version

  TimeframeFormula init_frame_;
  std::vector<TimeframeFormula> frames_;
  TimeframeFormula* cur_ = nullptr;
  int cur_frame_ = -1;  // -1 while emitting the initial frame
  int name_step_ = 0;

  std::vector<SRef> guard_stack_;
  SRef pending_assume_ = kNoExpr;

  const LoopDef* target_ = nullptr;
  int loop_index_ = 0;
  int temp_counter_ = 0;
  std::map<int, SsaName> frame_inputs_;   // per-frame input names
  std::map<int, SsaName> frame_nondets_;  // per-frame nondet site names
  bool havocked_ = false;
};

}  // namespace ibmc
