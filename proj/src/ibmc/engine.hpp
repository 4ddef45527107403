#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ast.hpp"
#include "cnf.hpp"

namespace ibmc {

struct EngineOptions {
  bool incremental = false;
  bool kinduction = false;
  bool slice = false;
  Encoder::RefineMode refine = Encoder::RefineMode::Off;
  bool sat_preprocess = true;
  bool stop_when_unsat = false;
  bool const_prop = true;
  std::optional<int> unwind_max;
  std::string loop_id;  // empty: schedule every unbounded loop in order
  std::optional<double> timeout_s;
  std::string dump_dimacs;  // empty: no dump
  uint64_t seed = 0;
  enum class Compact { Auto, Always, Never };
  Compact compact = Compact::Auto;  // solver GC policy (tests override)
};

struct TraceRow {
  int step = 0;
  int loop_index = 0;
  // nondet() draws appear as inputs under "nondet#<site>".
  std::vector<std::pair<std::string, int64_t>> inputs;
  std::vector<std::pair<std::string, int64_t>> state;
};

struct Trace {
  std::vector<TraceRow> rows;
  int violated_assert = -1;
  int violated_step = -1;
};

struct Verdict {
  enum class Kind { Counterexample, BoundedSafe, Proved, Resource };
  Kind kind = Kind::BoundedSafe;
  int depth = -1;  // cex depth / max depth explored / k of the induction
  std::optional<Trace> trace;
  std::string note;
};

struct SolveCall {
  int frame = 0;
  int ell = 0;
  uint64_t clauses = 0;
  uint64_t vars = 0;
  double ms = 0;
};

struct RunStats {
  uint64_t property_solves = 0;
  uint64_t total_solves = 0;
  uint64_t clauses_final = 0;
  uint64_t vars_final = 0;
  uint64_t clauses_encoded_total = 0;
  uint64_t refinement_rounds = 0;
  uint64_t array_lemmas = 0;
  uint64_t over_unsat_shortcircuits = 0;
  uint64_t compactions = 0;
  double solve_ms = 0;
  double wall_ms = 0;
  uint64_t peak_mem_kb = 0;
  int depth_reached = -1;
  std::vector<SolveCall> calls;
};

struct RunResult {
  Verdict verdict;
  RunStats stats;
};

// Runs the configured analysis on a typechecked, loop-expanded program.
RunResult run_verification(const Program& p, const EngineOptions& opts);

std::string verdict_kind_str(Verdict::Kind k);

}  // namespace ibmc
