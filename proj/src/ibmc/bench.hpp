#pragma once

#include <optional>
#include <string>
#include <vector>

namespace ibmc {

// Mode tokens: base "i" (incremental) or "ni", plus feature suffixes
// "+s" (slice), "+p" (SAT preprocessing), "+r" (bitvector refinement),
// "+k" (k-induction), e.g. "ni+s+p" or "i+s+p+r".
struct BenchMode {
  std::string token;
  bool incremental = false;
  bool slice = false;
  bool preprocess = false;
  bool refine = false;
  bool kinduction = false;
};

BenchMode parse_mode(const std::string& token);
std::vector<std::string> mode_flags(const BenchMode& m);

struct BenchRecord {
  std::string benchmark;
  std::string mode;
  std::string verdict;  // counterexample/bounded_safe/proved/timeout/error
  int depth = -1;
  double wall_ms = 0;
  double solve_ms = 0;
  uint64_t clauses = 0;
  uint64_t vars = 0;
  uint64_t solves = 0;
  uint64_t peak_mem_kb = 0;
  bool completed = false;
  bool expected_ok = false;
};

struct BenchReport {
  std::vector<BenchRecord> records;
  // speedups of i-mode over its ni twin, per benchmark solved by both
  struct Pair {
    std::string bench;
    std::string i_mode, ni_mode;
    double speedup;
  };
  std::vector<Pair> pairs;
  double geo_mean = 0;
  double arith_mean = 0;
  int mismatches = 0;
  int timeouts = 0;
};

// Runs every .rsl benchmark in `dir` under every mode in isolated child
// processes (`jobs` in parallel, each with `timeout_s`), writes the CSV
// and returns the report. `self_exe` is the ibmc binary to exec.
BenchReport bench_compare(const std::string& dir,
                          const std::vector<std::string>& modes,
                          const std::string& out_csv, int jobs,
                          double timeout_s, const std::string& self_exe);

std::string render_report(const BenchReport& r);

}  // namespace ibmc
