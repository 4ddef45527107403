#include <unistd.h>

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "ibmc/bench.hpp"
#include "ibmc/dimacs.hpp"
#include "ibmc/engine.hpp"
#include "ibmc/frontend.hpp"
#include "ibmc/gen.hpp"
#include "ibmc/interp.hpp"
#include "ibmc/symex.hpp"

namespace {

constexpr int kExitCex = 10;
constexpr int kExitSafe = 0;
constexpr int kExitResource = 2;
constexpr int kExitUsage = 1;

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream is(path);
  if (!is) throw ibmc::UsageError("cannot open " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string self_exe() {
  char buf[4096];
  ssize_t n = readlink("/proc/self/exe", buf, sizeof(buf) - 1);
  if (n <= 0) return "ibmc";
  buf[n] = '\0';
  return buf;
}

void print_trace(const ibmc::Trace& tr, const ibmc::Program& p) {
  for (const auto& row : tr.rows) {
    std::cout << "step " << row.step << ":";
    for (const auto& [name, v] : row.inputs) std::cout << " " << name << "=" << v;
    for (const auto& [name, v] : row.state) std::cout << " " << name << "=" << v;
    std::cout << "\n";
  }
  std::cout << "violation: assert a" << tr.violated_assert;
  if (tr.violated_assert >= 0 &&
      size_t(tr.violated_assert) < p.asserts.size())
    std::cout << " (line " << p.asserts[size_t(tr.violated_assert)].loc.line
              << ")";
  std::cout << " at step " << tr.violated_step << "\n";
}

void write_trace_json(const ibmc::Trace& tr, const std::string& path) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& row : tr.rows) {
    nlohmann::json inputs = nlohmann::json::object();
    for (const auto& [name, v] : row.inputs) inputs[name] = v;
    nlohmann::json state = nlohmann::json::object();
    for (const auto& [name, v] : row.state) state[name] = v;
    steps.push_back({{"step", row.step},
                     {"loop", row.loop_index},
                     {"inputs", inputs},
                     {"state", state}});
  }
  nlohmann::json doc = {
      {"steps", steps},
      {"violated",
       {{"assert_id", "a" + std::to_string(tr.violated_assert)},
        {"step", tr.violated_step}}}};
  std::ofstream os(path);
  os << doc.dump(2) << "\n";
}

void print_stats(const ibmc::RunResult& r) {
  const ibmc::RunStats& s = r.stats;
  double encoded_per_solve =
      s.property_solves ? double(s.clauses_encoded_total) /
                              double(s.property_solves)
                        : 0;
  std::cout << "RESULT verdict=" << ibmc::verdict_kind_str(r.verdict.kind)
            << " depth=" << r.verdict.depth << " wall_ms=" << s.wall_ms
            << " solve_ms=" << s.solve_ms << " clauses=" << s.clauses_final
            << " vars=" << s.vars_final << " solves=" << s.property_solves
            << " total_solves=" << s.total_solves
            << " encoded_clauses=" << s.clauses_encoded_total
            << " encoded_per_solve=" << encoded_per_solve
            << " refine_rounds=" << s.refinement_rounds
            << " array_lemmas=" << s.array_lemmas
            << " over_shortcircuits=" << s.over_unsat_shortcircuits
            << " compactions=" << s.compactions
            << " peak_mem_kb=" << s.peak_mem_kb << "\n";
}

int cmd_check(const std::string& file, ibmc::EngineOptions opts,
              bool show_loops, bool show_ssa, bool unwinding_assertions,
              bool quiet, bool stats, const std::string& trace_json) {
  ibmc::SourceProgram src{read_file(file), file};
  ibmc::Program p = ibmc::parse(src);
  ibmc::typecheck(p);

  if (show_loops) {
    for (const auto& l : ibmc::index_loops(p)) {
      std::cout << l.id << "  "
                << (l.bounded ? "bounded(" + std::to_string(l.bound) + ")"
                              : "unbounded")
                << "  depth " << l.depth << "\n";
    }
    return kExitSafe;
  }

  ibmc::expand_bounded_loops(p, unwinding_assertions);

  if (show_ssa) {
    std::string loop = opts.loop_id.empty() ? p.loops[0].id : opts.loop_id;
    ibmc::UnwindingSession sess(p, loop, opts.const_prop);
    int kmax = opts.unwind_max.value_or(3);
    for (int k = 0; k <= kmax; ++k) sess.unwind_step();
    std::cout << sess.dump_ssa();
    return kExitSafe;
  }

  ibmc::RunResult r = ibmc::run_verification(p, opts);
  switch (r.verdict.kind) {
    case ibmc::Verdict::Kind::Counterexample:
      std::cout << "VERDICT: counterexample at depth " << r.verdict.depth
                << "\n";
      if (r.verdict.trace) {
        if (!quiet) print_trace(*r.verdict.trace, p);
        if (!trace_json.empty()) write_trace_json(*r.verdict.trace, trace_json);
      }
      break;
    case ibmc::Verdict::Kind::BoundedSafe:
      std::cout << "VERDICT: bounded-safe up to depth " << r.verdict.depth;
      if (!r.verdict.note.empty()) std::cout << " (" << r.verdict.note << ")";
      std::cout << "\n";
      break;
    case ibmc::Verdict::Kind::Proved:
      std::cout << "VERDICT: proved by " << r.verdict.depth << "-induction\n";
      break;
    case ibmc::Verdict::Kind::Resource:
      std::cout << "VERDICT: unknown (" << r.verdict.note << ")\n";
      break;
  }
  if (stats) print_stats(r);
  switch (r.verdict.kind) {
    case ibmc::Verdict::Kind::Counterexample: return kExitCex;
    case ibmc::Verdict::Kind::Resource: return kExitResource;
    default: return kExitSafe;
  }
}

int cmd_sat(const std::string& file, bool preprocess) {
  std::ifstream is(file);
  if (!is) throw ibmc::UsageError("cannot open " + file);
  ibmc::sat::DimacsProblem prob = ibmc::sat::read_dimacs(is);
  ibmc::sat::Solver solver;
  solver.set_preprocessing(preprocess);
  ibmc::sat::load_dimacs(solver, prob);
  ibmc::sat::Status st = solver.solve({});
  if (st == ibmc::sat::Status::Sat) {
    std::cout << "SAT\n";
    std::cout << "v";
    for (int v = 0; v < prob.num_vars; ++v)
      std::cout << " " << (solver.model_value(v) ? v + 1 : -(v + 1));
    std::cout << " 0\n";
    return kExitCex;
  }
  std::cout << "UNSAT\n";
  return kExitSafe;
}

int cmd_gen(const std::string& family, const ibmc::GenParams& params,
            const std::string& out_dir) {
  auto benches = ibmc::gen_family(family, params);
  for (const auto& b : benches) {
    std::string base = out_dir + "/" + b.name;
    std::ofstream(base + ".rsl") << b.source;
    std::ofstream(base + ".expect") << b.expectation;
    std::cout << base << ".rsl\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ibmc: incremental SAT-based bounded model checker"};
  app.require_subcommand(1);

  // check
  auto* check = app.add_subcommand("check", "verify a .rsl program");
  std::string file;
  check->add_option("file", file, "program file (.rsl, or - for stdin)")
      ->required();
  ibmc::EngineOptions opts;
  bool show_loops = false, show_ssa = false, quiet = false, stats = false;
  bool no_unwinding_assertions = false, no_preproc = false;
  bool no_const_prop = false, refine = false, refine_under = false;
  int unwind_max = -1;
  double timeout_s = -1;
  std::string trace_json, incr_check;
  check->add_flag("--incremental", opts.incremental,
                  "one solver across all unwindings");
  check->add_option("--incremental-check", incr_check,
                    "loop id to check incrementally (implies --incremental)");
  check->add_option("--unwind-max", unwind_max, "maximum unwinding depth");
  check->add_flag("--slice-formula", opts.slice, "cone-of-influence slicing");
  check->add_flag("--refine", refine, "bitvector over-approximation refinement");
  check->add_flag("--refine-under", refine_under,
                  "bitvector under-approximation refinement");
  check->add_flag("--no-sat-preprocessor", no_preproc,
                  "store clauses verbatim");
  check->add_flag("--no-unwinding-assertions", no_unwinding_assertions,
                  "skip unwinding assertions for bounded loops");
  check->add_flag("--stop-when-unsat", opts.stop_when_unsat,
                  "keep unwinding while SAT, stop at first UNSAT");
  check->add_flag("--k-induction", opts.kinduction,
                  "split-case k-induction prover");
  check->add_flag("--show-loops", show_loops, "print the loop table");
  check->add_flag("--show-ssa", show_ssa, "print unwound SSA equations");
  check->add_option("--dump-dimacs", opts.dump_dimacs,
                    "write DIMACS after each solve");
  check->add_option("--trace-json", trace_json, "write the trace as JSON");
  check->add_option("--seed", opts.seed, "decision seed (runs are "
                    "deterministic per seed)");
  check->add_option("--timeout", timeout_s, "wall-clock limit in seconds");
  check->add_flag("--stats", stats, "print a machine-readable RESULT line");
  check->add_flag("--quiet", quiet, "suppress the trace printout");
  check->add_flag("--no-const-prop", no_const_prop,
                  "disable constant propagation in symbolic execution");

  // sat
  auto* satcmd = app.add_subcommand("sat", "solve a DIMACS CNF file");
  std::string cnf_file;
  bool sat_no_preproc = false;
  satcmd->add_option("file", cnf_file, "DIMACS file")->required();
  satcmd->add_flag("--no-sat-preprocessor", sat_no_preproc);

  // bench
  auto* bench = app.add_subcommand("bench", "run a benchmark directory");
  std::string bench_dir, bench_out = "bench.csv", bench_modes = "ni+s+p,i+s+p";
  int bench_jobs = 1;
  double bench_timeout = 60;
  bench->add_option("dir", bench_dir, "directory of .rsl + .expect files")
      ->required();
  bench->add_option("--modes", bench_modes, "comma-separated mode tokens");
  bench->add_option("--out", bench_out, "CSV output path");
  bench->add_option("--jobs", bench_jobs, "parallel child processes");
  bench->add_option("--timeout", bench_timeout, "per-run timeout seconds");

  // gen
  auto* gen = app.add_subcommand("gen", "generate benchmark families");
  std::string family, gen_out = ".";
  ibmc::GenParams params;
  gen->add_option("family", family,
                  "counter|deadvars|mul_guard|array_chain|multiloop")
      ->required();
  gen->add_option("--d", params.d, "depth parameter");
  gen->add_option("--n", params.n, "count parameter");
  gen->add_option("--w", params.w, "bit width");
  gen->add_option("--loops", params.loops, "loop count");
  gen->add_option("--out", gen_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) {
      if (opts.kinduction && opts.stop_when_unsat)
        throw ibmc::UsageError(
            "--stop-when-unsat is implied by --k-induction; do not combine");
      if (refine && refine_under)
        throw ibmc::UsageError("--refine and --refine-under conflict");
      if (refine) opts.refine = ibmc::Encoder::RefineMode::Over;
      if (refine_under) opts.refine = ibmc::Encoder::RefineMode::Under;
      if (!incr_check.empty()) {
        opts.incremental = true;
        // ids print as main.N; a c: prefix is tolerated
        if (incr_check.rfind("c:", 0) == 0) incr_check = incr_check.substr(2);
        opts.loop_id = incr_check;
      }
      if (unwind_max >= 0) opts.unwind_max = unwind_max;
      if (timeout_s > 0) opts.timeout_s = timeout_s;
      opts.sat_preprocess = !no_preproc;
      opts.const_prop = !no_const_prop;
      return cmd_check(file, opts, show_loops, show_ssa,
                       !no_unwinding_assertions, quiet, stats, trace_json);
    }
    if (satcmd->parsed()) return cmd_sat(cnf_file, !sat_no_preproc);
    if (bench->parsed()) {
      std::vector<std::string> modes;
      std::istringstream ms(bench_modes);
      std::string tok;
      while (std::getline(ms, tok, ',')) modes.push_back(tok);
      ibmc::BenchReport rep = ibmc::bench_compare(
          bench_dir, modes, bench_out, bench_jobs, bench_timeout, self_exe());
      std::cout << render_report(rep);
      return rep.mismatches == 0 ? 0 : 1;
    }
    if (gen->parsed()) return cmd_gen(family, params, gen_out);
  } catch (const ibmc::FrontendError& e) {
    std::cerr << "error: " << file << ":" << e.what() << "\n";
    return kExitUsage;
  } catch (const ibmc::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
