#include <random>

#include "doctest.h"
#include "ibmc/sat.hpp"
#include "support/oracle.hpp"

using namespace ibmc::sat;

namespace {

Lit L(Solver& s, int dimacs) {
  (void)s;
  return mkLit(std::abs(dimacs) - 1, dimacs < 0);
}

void ensure_vars(Solver& s, int n) {
  while (s.num_vars() < n) s.new_var();
}

Status solve_dimacs(Solver& s, const std::vector<std::vector<int>>& clauses,
                    int nvars, const std::vector<int>& assumps = {}) {
  ensure_vars(s, nvars);
  for (const auto& cl : clauses) {
    std::vector<Lit> lits;
    for (int l : cl) lits.push_back(L(s, l));
    s.add_clause(lits);
  }
  std::vector<Lit> as;
  for (int a : assumps) as.push_back(L(s, a));
  return s.solve(as);
}

}  // namespace

TEST_CASE("contradictory units are unsat") {
  Solver s;
  ensure_vars(s, 1);
  s.add_clause({L(s, 1)});
  s.add_clause({L(s, -1)});
  CHECK(s.solve({}) == Status::Unsat);
  CHECK(s.poisoned());
  // permanently UNSAT afterwards
  CHECK(s.solve({}) == Status::Unsat);
}

TEST_CASE("tautologies are accepted and simplified away") {
  Solver s;
  ensure_vars(s, 2);
  s.add_clause({L(s, 1), L(s, -1)});
  CHECK(s.num_clauses() == 0);
  CHECK(s.solve({}) == Status::Sat);
}

TEST_CASE("empty clause poisons the solver") {
  Solver s;
  s.add_clause(std::vector<Lit>{});
  CHECK(s.poisoned());
  CHECK(s.solve({}) == Status::Unsat);
  CHECK(s.conflict_core().empty());
}

TEST_CASE("unit under assumption") {
  Solver s;
  ensure_vars(s, 2);
  s.add_clause({L(s, 1), L(s, 2)});  // x | a
  CHECK(s.solve({L(s, -2)}) == Status::Sat);
  CHECK(s.model_value(L(s, 1)));
}

TEST_CASE("assumption core and flipped assumption") {
  Solver s;
  ensure_vars(s, 2);
  s.add_clause({L(s, 1), L(s, 2)});   // x | a
  s.add_clause({L(s, -1), L(s, 2)});  // !x | a
  CHECK(s.solve({L(s, -2)}) == Status::Unsat);
  for (Lit c : s.conflict_core()) CHECK(c == L(s, -2));
  CHECK(!s.conflict_core().empty());
  CHECK(s.solve({L(s, 2)}) == Status::Sat);
}

TEST_CASE("pigeonhole php(4,3) is unsat") {
  // var(p,h) = 3p + h + 1 for p in 0..3, h in 0..2
  Solver s;
  ensure_vars(s, 12);
  auto v = [](int p, int h) { return 3 * p + h + 1; };
  for (int p = 0; p < 4; ++p)
    s.add_clause({L(s, v(p, 0)), L(s, v(p, 1)), L(s, v(p, 2))});
  for (int h = 0; h < 3; ++h)
    for (int p = 0; p < 4; ++p)
      for (int q = p + 1; q < 4; ++q)
        s.add_clause({L(s, -v(p, h)), L(s, -v(q, h))});
  CHECK(s.solve({}) == Status::Unsat);
}

TEST_CASE("preprocessing on: units subsume later clauses") {
  Solver s;
  ensure_vars(s, 2);
  s.add_clause({L(s, 1)});
  s.add_clause({L(s, 1), L(s, 2)});
  CHECK(s.num_clauses() == 1);  // only the unit is stored
}

TEST_CASE("preprocessing off: clauses stored verbatim") {
  Solver s;
  s.set_preprocessing(false);
  ensure_vars(s, 2);
  s.add_clause({L(s, 1)});
  s.add_clause({L(s, 1), L(s, 2)});
  CHECK(s.num_clauses() == 2);
  CHECK(s.solve({}) == Status::Sat);
}

TEST_CASE("preprocessing cannot be toggled after solving") {
  Solver s;
  ensure_vars(s, 1);
  s.add_clause({L(s, 1)});
  CHECK(s.solve({}) == Status::Sat);
  CHECK_THROWS_AS(s.set_preprocessing(false), std::logic_error);
}

TEST_CASE("verdicts agree with and without preprocessing") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 300; ++i) {
    int nvars = 4 + int(rng() % 10);
    int nclauses = int(double(nvars) * (3.0 + double(rng() % 20) / 10));
    auto cnf = ibmc::test::random_cnf(rng, nvars, nclauses);
    Solver a;
    Solver b;
    b.set_preprocessing(false);
    Status ra = solve_dimacs(a, cnf, nvars);
    Status rb = solve_dimacs(b, cnf, nvars);
    CHECK(ra == rb);
  }
}

TEST_CASE("fuzz against the dpll oracle") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 1500; ++i) {
    int nvars = 3 + int(rng() % 18);
    int nclauses = int(double(nvars) * (3.0 + double(rng() % 20) / 10));
    auto cnf = ibmc::test::random_cnf(rng, nvars, nclauses);
    bool expect = ibmc::test::dpll_sat(cnf, nvars);
    Solver s;
    Status got = solve_dimacs(s, cnf, nvars);
    CHECK((got == Status::Sat) == expect);
    if (got == Status::Sat) CHECK(s.model_satisfies_originals());
  }
}

TEST_CASE("assumptions are equivalent to units") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 400; ++i) {
    int nvars = 4 + int(rng() % 14);
    int nclauses = int(double(nvars) * 3.5);
    auto cnf = ibmc::test::random_cnf(rng, nvars, nclauses);
    std::vector<int> assumps;
    for (int j = 0; j < int(rng() % 4); ++j) {
      int v = 1 + int(rng() % uint64_t(nvars));
      assumps.push_back(rng() % 2 ? v : -v);
    }
    Solver a;
    Status ra = solve_dimacs(a, cnf, nvars, assumps);
    Solver b;
    ensure_vars(b, nvars);
    auto with_units = cnf;
    for (int l : assumps) with_units.push_back({l});
    Status rb = solve_dimacs(b, with_units, nvars);
    CHECK(ra == rb);
    if (ra == Status::Unsat) {
      // the reported core is a subset of the assumptions
      for (Lit c : a.conflict_core()) {
        bool member = false;
        for (int l : assumps)
          if (L(a, l) == c) member = true;
        CHECK(member);
      }
    }
  }
}

TEST_CASE("interleaved solving matches batch solving") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 150; ++i) {
    int nvars = 5 + int(rng() % 12);
    auto cnf = ibmc::test::random_cnf(rng, nvars, int(nvars * 4));
    Solver inc;
    ensure_vars(inc, nvars);
    size_t half = cnf.size() / 2;
    for (size_t j = 0; j < half; ++j) {
      std::vector<Lit> lits;
      for (int l : cnf[j]) lits.push_back(L(inc, l));
      inc.add_clause(lits);
    }
    (void)inc.solve({});
    for (size_t j = half; j < cnf.size(); ++j) {
      std::vector<Lit> lits;
      for (int l : cnf[j]) lits.push_back(L(inc, l));
      inc.add_clause(lits);
    }
    Status ri = inc.solve({});
    Solver batch;
    Status rb = solve_dimacs(batch, cnf, nvars);
    CHECK(ri == rb);
  }
}

TEST_CASE("restart_and_compact drops retired activation groups") {
  Solver s;
  ensure_vars(s, 30);
  // ten groups (x_i | alpha_i); retiring alpha_i satisfies the group
  std::vector<int> alphas;
  for (int i = 0; i < 10; ++i) {
    int x = i + 1, alpha = 11 + i;
    alphas.push_back(alpha);
    s.add_clause({L(s, x), L(s, alpha)});
    s.add_clause({L(s, -x), L(s, 21 + i)});
  }
  CHECK(s.solve({L(s, -alphas[0])}) == Status::Sat);
  for (int a : alphas) s.add_clause({L(s, a)});  // retire
  int before = s.num_clauses();
  s.restart_and_compact();
  CHECK(s.num_clauses() < before);
  CHECK(s.solve({}) == Status::Sat);
}

TEST_CASE("compact is a no-op for fresh formulas") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 60; ++i) {
    int nvars = 6 + int(rng() % 10);
    auto cnf = ibmc::test::random_cnf(rng, nvars, nvars * 4);
    Solver a;
    Status ra = solve_dimacs(a, cnf, nvars);
    a.restart_and_compact();
    Status ra2 = a.solve({});
    CHECK(ra == ra2);
  }
}
