#pragma once

#include <set>
#include <unordered_map>
#include <vector>

#include "symex.hpp"

namespace ibmc {

// Monotonic incremental cone-of-influence slicing over guarded equations.
// Dependency granularity is whole equations via read-sets; guards count as
// reads and assume equations are always kept once any property atom
// exists. The kept set only grows.
class Slicer {
 public:
  explicit Slicer(bool enabled) : enabled_(enabled) {}

  // Registers newly generated equations and returns the ids that become
  // part of the slice with the given new atoms (ascending order). When
  // disabled, returns all new ids.
  std::vector<int> slice_increment(const UnwindingSession& sess,
                                   const std::vector<int>& new_eq_ids,
                                   const std::vector<PropertyAtom>& new_atoms);

  bool enabled() const { return enabled_; }
  const std::set<int>& kept() const { return kept_; }
  size_t seen() const { return seen_; }

 private:
  void keep_closure(const UnwindingSession& sess, int eq_id,
                    std::vector<int>& out);

  bool enabled_;
  bool atoms_seen_ = false;
  size_t seen_ = 0;
  std::set<int> kept_;
  std::unordered_map<uint64_t, int> def_of_;
  std::vector<int> assume_eqs_;
};

}  // namespace ibmc
