#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "types.hpp"

namespace ibmc {

// SSA name: (base, step, version). State boundary names carry the boundary
// index as their step: the initial frame defines x@0 and body frame k
// writes x@{k+1} versions. Inputs of frame k are named at step k.
struct SsaName {
  int32_t base = -1;
  int32_t step = 0;
  int32_t ver = 0;

  bool valid() const { return base >= 0; }
  uint64_t key() const {
    return (uint64_t(uint32_t(base)) << 40) |
           (uint64_t(uint32_t(step) & 0xffffff) << 16) |
           uint64_t(uint32_t(ver) & 0xffff);
  }
  bool operator==(const SsaName& o) const {
    return base == o.base && step == o.step && ver == o.ver;
  }
  bool operator!=(const SsaName& o) const { return !(*this == o); }
  bool operator<(const SsaName& o) const { return key() < o.key(); }
};

// Expression over SSA names, stored in a per-session arena; nodes are
// referenced by index. -1 stands for "no expression" (true guards).
using SRef = int32_t;
constexpr SRef kNoExpr = -1;

struct SNode {
  enum class Kind : uint8_t { Const, Name, Unary, Binary, Ternary, Cast, Select };
  Kind kind;
  Type type;
  uint64_t value = 0;  // Const
  SsaName name;        // Name; Select: the array version read
  UnOp unop = UnOp::Neg;
  BinOp binop = BinOp::Add;
  SRef a = kNoExpr, b = kNoExpr, c = kNoExpr;
};

enum class EqKind : uint8_t { Define, Store, Assume, Property };

// One guarded SSA equation. Reads cover the guard, the right-hand side
// and (for stores) the previous array version; guards count as reads for
// slicing purposes.
struct GuardedEquation {
  int id = -1;
  int frame = -1;  // -1 = initial frame
  EqKind kind = EqKind::Define;
  SRef guard = kNoExpr;      // Store/Assume path guard
  SsaName lhs;               // Define/Property target; Store: new version
  SRef rhs = kNoExpr;        // Define/Property value; Store: stored value;
                             // Assume: condition
  SsaName array_prev;        // Store only
  SRef index = kNoExpr;      // Store only (Name or Const)
  int assert_id = -1;        // Property only
  std::vector<SsaName> reads;
};

struct PropertyAtom {
  int eq_id = -1;
  SsaName name;   // boolean: true iff the assert is violated
  int assert_id = -1;
  int solve_frame = 0;  // init atoms belong to solve 0
};

// T_k for one unwinding step: the equations generated by executing the
// loop body once, its property atoms, and the state boundary at the end.
struct TimeframeFormula {
  int step = 0;
  std::vector<int> eq_ids;
  std::vector<PropertyAtom> atoms;
  std::vector<std::pair<int, SsaName>> boundary;  // base id -> end-of-step name
  std::vector<std::pair<int, SsaName>> input_names;   // input base -> name
  std::vector<std::pair<int, SsaName>> nondet_names;  // site -> name
  int loop_index = 0;  // which unbounded loop produced this frame
};

}  // namespace ibmc
