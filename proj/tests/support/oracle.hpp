#pragma once

#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ibmc/interp.hpp"
#include "ibmc/symex.hpp"

namespace ibmc::test {

// parse + typecheck + expand, throwing on any failure.
Program compile(const std::string& source, bool unwinding_assertions = true);

// Explicit-state breadth-first model checker, independent of the SAT
// pipeline (shares only the frontend and the concrete interpreter). The
// schedule runs each unbounded loop for kmax+1 frames, in order, like the
// engine's multi-loop driver.
struct OracleOutcome {
  bool cex = false;
  int depth = -1;  // first violating frame
};
OracleOutcome bfs_check(const Program& p, int kmax,
                        size_t state_cap = 1 << 20);

// Runs BFS to closure (or the cap) and reports whether any reachable
// execution violates an assert; used to cross-check Proved verdicts.
std::optional<int> bfs_refutes(const Program& p, int max_depth = 64,
                               size_t state_cap = 1 << 20);

// Whether the BFS oracle can afford this program (input/nondet branching
// per step and total state estimate).
bool oracle_feasible(const Program& p, int kmax, size_t state_cap = 1 << 20);

// Basic DPLL (unit propagation + splitting), the reference for solver
// fuzzing. Clauses use DIMACS-signed literals, variables 1..nvars.
bool dpll_sat(const std::vector<std::vector<int>>& clauses, int nvars);

// Substitution checker: evaluates the session's guarded equations under
// concrete values for all source names and reports per-solve-frame
// results, without any SAT involvement.
struct EvalOutcome {
  // per solve frame: does some property atom evaluate to true?
  std::vector<bool> atom_true;
  // per solve frame: do all assume equations of that frame hold?
  std::vector<bool> assumes_ok;
};
EvalOutcome eval_equations(const UnwindingSession& sess, int depth,
                           const std::map<uint64_t, uint64_t>& source_values);

// Random well-typed programs for differential testing. Small widths and
// few input bits keep the BFS oracle tractable.
std::string random_program(std::mt19937_64& rng);

// Random 3-ish-SAT instance in DIMACS-signed form.
std::vector<std::vector<int>> random_cnf(std::mt19937_64& rng, int nvars,
                                         int nclauses);

}  // namespace ibmc::test
