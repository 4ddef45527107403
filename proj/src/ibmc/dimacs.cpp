#include "dimacs.hpp"

#include <cstdlib>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ibmc::sat {

DimacsProblem read_dimacs(std::istream& is) {
  DimacsProblem p;
  bool header = false;
  int declared_clauses = 0;
  std::string line;
  std::vector<int> current;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == 'c') continue;
    if (line[0] == 'p') {
      std::istringstream ls(line);
      std::string tok, fmt;
      ls >> tok >> fmt >> p.num_vars >> declared_clauses;
      if (fmt != "cnf" || p.num_vars < 0 || declared_clauses < 0)
        throw std::runtime_error("malformed DIMACS header: " + line);
      header = true;
      continue;
    }
    std::istringstream ls(line);
    int lit;
    while (ls >> lit) {
      if (lit == 0) {
        p.clauses.push_back(current);
        current.clear();
      } else {
        int v = std::abs(lit);
        if (v > p.num_vars) p.num_vars = v;
        current.push_back(lit);
      }
    }
  }
  if (!current.empty()) p.clauses.push_back(current);
  if (!header) throw std::runtime_error("missing DIMACS 'p cnf' header");
  return p;
}

void load_dimacs(Solver& s, const DimacsProblem& p) {
  for (int i = 0; i < p.num_vars; ++i) s.new_var();
  for (const auto& cl : p.clauses) {
    std::vector<Lit> lits;
    lits.reserve(cl.size());
    for (int l : cl) lits.push_back(mkLit(std::abs(l) - 1, l < 0));
    s.add_clause(std::move(lits));
  }
}

}  // namespace ibmc::sat
