#pragma once

#include <iosfwd>
#include <vector>

#include "sat.hpp"

namespace ibmc::sat {

struct DimacsProblem {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;  // DIMACS-signed literals
};

// Throws std::runtime_error on malformed input.
DimacsProblem read_dimacs(std::istream& is);

// Loads the problem into the solver, creating variables 0..num_vars-1.
void load_dimacs(Solver& s, const DimacsProblem& p);

}  // namespace ibmc::sat
