#pragma once

#include <optional>

#include "ast.hpp"
#include "parser.hpp"

namespace ibmc {

// Type-checks the AST in place: annotates expression types, resolves
// context-typed literals and nondet() calls, numbers asserts and nondet
// sites, builds the variable and loop tables. Throws TypeError.
void typecheck(Program& p);

// Loop table for --show-loops (requires typecheck).
const std::vector<LoopInfo>& index_loops(const Program& p);

// Replaces every bounded `for` loop by its fully unwound body with the
// induction variable substituted as a constant. Unless
// `unwinding_assertions` is false, a guarded assert(false) is appended
// after the last copy (the guard is the statically-false continuation
// condition). Nondet sites are renumbered afterwards.
void expand_bounded_loops(Program& p, bool unwinding_assertions = true);

// Constant value of a typed scalar expression, if it folds syntactically.
std::optional<uint64_t> fold_const(const Expr& e);

// Names assigned anywhere in the block (includes locals and array stores).
std::set<std::string> modified_vars(const Block& b);

// Asserts usable as a k-induction entry assumption: guard and expression
// read only state variables, none of which are reassigned on any path
// between the assert and the end of the body. Returned as (guard, cond)
// expression pairs over source variable names.
struct EntryAssert {
  ExprPtr guard;  // conjunction of enclosing if conditions (null = true)
  ExprPtr cond;
  int assert_id;
};
std::vector<EntryAssert> tail_stable_asserts(const Program& p,
                                             const Block& body);

}  // namespace ibmc
