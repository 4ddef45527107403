#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ibmc {

struct GenParams {
  uint64_t d = 3;        // depth parameter
  uint64_t n = 10;       // count parameter (dead vars, chain length)
  unsigned w = 8;        // bit width
  uint64_t loops = 2;    // multiloop count
};

struct GeneratedBench {
  std::string name;
  std::string source;       // .rsl text
  std::string expectation;  // key=value sidecar
};

// Deterministic benchmark families:
//   counter(d)            bug at depth d
//   deadvars(d, n)        safe at kmax d with n irrelevant state variables
//   mul_guard(w)          one safe and one buggy multiplication property
//   array_chain(n)        safe store/select chain of length n
//   multiloop(loops, d)   bug in the last loop at its depth d
std::vector<GeneratedBench> gen_family(const std::string& family,
                                       const GenParams& params);

}  // namespace ibmc
