#pragma once

#include <functional>
#include <map>

#include "ast.hpp"

namespace ibmc {

// Concrete machine state between loop iterations. Arrays are sparse maps
// over the full index domain with a per-array default (the broadcast
// initializer).
struct ConcreteState {
  std::map<std::string, uint64_t> scalars;
  std::map<std::string, std::map<uint64_t, uint64_t>> arrays;
  std::map<std::string, uint64_t> array_default;

  bool operator==(const ConcreteState& o) const {
    return scalars == o.scalars && arrays == o.arrays;
  }
  bool operator<(const ConcreteState& o) const {
    if (scalars != o.scalars) return scalars < o.scalars;
    return arrays < o.arrays;
  }
};

// Supplies the value of nondet() site `site`; the interpreter masks it to
// the site's width.
using DrawFn = std::function<uint64_t(int site)>;

struct ExecResult {
  std::vector<int> violations;  // assert ids fired, in execution order
  bool blocked = false;         // a failing assume aborted the path
  ConcreteState state;          // post state; not reachable if blocked
};

// Concrete execution over the expanded program: one init run, then one
// loop body per step. Inputs are fresh per step; reading an input twice
// in a step yields the same value.
class Interpreter {
 public:
  explicit Interpreter(const Program& p);

  ExecResult run_init(const DrawFn& draws) const;
  ExecResult step(const ConcreteState& s, const Block& body,
                  const std::map<std::string, uint64_t>& inputs,
                  const DrawFn& draws) const;

  const Program& program() const { return p_; }

 private:
  const Program& p_;
};

}  // namespace ibmc
