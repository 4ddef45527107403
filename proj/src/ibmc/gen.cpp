#include "gen.hpp"

#include <sstream>
#include <stdexcept>

namespace ibmc {

namespace {

std::string expectation(const std::string& verdict, uint64_t depth,
                        uint64_t kmax, bool oracle) {
  std::ostringstream os;
  os << "verdict=" << verdict << "\n"
     << "depth=" << depth << "\n"
     << "kmax=" << kmax << "\n"
     << "oracle=" << (oracle ? 1 : 0) << "\n";
  return os.str();
}

GeneratedBench gen_counter(uint64_t d) {
  std::ostringstream os;
  os << "input u8 e;\n"
     << "state u32 c := 0;\n"
     << "loop main {\n"
     << "  assert(c != " << d << ");\n"
     << "  c := c + 1 + (e as u32);\n"
     << "  c := c - (e as u32);\n"
     << "}\n";
  GeneratedBench b;
  b.name = "counter_" + std::to_string(d);
  b.source = os.str();
  b.expectation = expectation("counterexample", d, d, true);
  return b;
}

GeneratedBench gen_deadvars(uint64_t d, uint64_t n) {
  std::ostringstream os;
  os << "input u8 e;\n"
     << "state u32 c := 0;\n";
  for (uint64_t i = 0; i < n; ++i)
    os << "state u32 g" << i << " := 1;\n";
  os << "loop main {\n"
     << "  c := c + 1 + (e as u32);\n"
     << "  c := c - (e as u32);\n";
  for (uint64_t i = 0; i < n; ++i) {
    os << "  g" << i << " := g" << i << " * 3 + ";
    if (i > 0) os << "g" << (i - 1) << " + ";
    os << "1;\n";
  }
  os << "  assert(c != 4000000000);\n"
     << "}\n";
  GeneratedBench b;
  b.name = "deadvars_" + std::to_string(d) + "_" + std::to_string(n);
  b.source = os.str();
  b.expectation = expectation("bounded_safe", d, d, true);
  return b;
}

std::vector<GeneratedBench> gen_mul_guard(unsigned w) {
  std::vector<GeneratedBench> out;
  {
    std::ostringstream os;
    os << "input u" << w << " x;\n"
       << "input u" << w << " y;\n"
       << "state u" << w << " s := 1;\n"
       << "loop main {\n"
       << "  s := s | (x * y) | 1;\n"
       << "  assert((s & 1) == 1);\n"
       << "}\n";
    GeneratedBench b;
    b.name = "mul_guard_safe_" + std::to_string(w);
    b.source = os.str();
    b.expectation = expectation("bounded_safe", 5, 5, w <= 8);
    out.push_back(std::move(b));
  }
  {
    std::ostringstream os;
    os << "input u" << w << " x;\n"
       << "state u" << w << " z := 0;\n"
       << "state u8 stp := 0;\n"
       << "loop main {\n"
       << "  stp := stp + 1;\n"
       << "  if (stp == 3) {\n"
       << "    z := x * x;\n"
       << "    assert(z != 49);\n"
       << "  }\n"
       << "}\n";
    GeneratedBench b;
    b.name = "mul_guard_bug_" + std::to_string(w);
    b.source = os.str();
    b.expectation = expectation("counterexample", 2, 3, w <= 8);
    out.push_back(std::move(b));
  }
  return out;
}

GeneratedBench gen_array_chain(uint64_t n) {
  std::ostringstream os;
  os << "input u2 j;\n"
     << "input u2 v;\n"
     << "state u2[4] a := 0;\n"
     << "state u2 i := 0;\n"
     << "loop main {\n";
  for (uint64_t t = 0; t < std::max<uint64_t>(n, 1); ++t) {
    os << "  a[i] := v;\n"
       << "  assert(a[i] == v);\n"
       << "  a[j] := a[j] | 1;\n"
       << "  assert((a[j] & 1) == 1);\n";
  }
  os << "  i := i + 1;\n"
     << "}\n";
  GeneratedBench b;
  b.name = "array_chain_" + std::to_string(n);
  b.source = os.str();
  b.expectation = expectation("bounded_safe", 4, 4, true);
  return b;
}

GeneratedBench gen_multiloop(uint64_t loops, uint64_t d) {
  if (loops < 1) throw std::invalid_argument("multiloop needs >= 1 loop");
  std::ostringstream os;
  os << "input u8 e;\n"
     << "state u32 c := 0;\n"
     << "state u32 b := 0;\n";
  for (uint64_t i = 0; i + 1 < loops; ++i)
    os << "loop l" << i << " { c := c + " << (i + 1)
       << " + (e as u32); c := c - (e as u32); }\n";
  os << "loop last {\n"
     << "  assert(b != " << d << ");\n"
     << "  assert((c | 1) != 0);\n"
     << "  b := b + 1 + (e as u32);\n"
     << "  b := b - (e as u32);\n"
     << "}\n";
  GeneratedBench b;
  b.name = "multiloop_" + std::to_string(loops) + "_" + std::to_string(d);
  b.source = os.str();
  b.expectation =
      expectation("counterexample", d, std::max<uint64_t>(d, 2), true);
  return b;
}

}  // namespace

std::vector<GeneratedBench> gen_family(const std::string& family,
                                       const GenParams& p) {
  if (family == "counter") return {gen_counter(p.d)};
  if (family == "deadvars") return {gen_deadvars(p.d, p.n)};
  if (family == "mul_guard") return gen_mul_guard(p.w);
  if (family == "array_chain") return {gen_array_chain(p.n)};
  if (family == "multiloop") return {gen_multiloop(p.loops, p.d)};
  throw std::invalid_argument("unknown family '" + family +
                              "' (counter, deadvars, mul_guard, "
                              "array_chain, multiloop)");
}

}  // namespace ibmc
