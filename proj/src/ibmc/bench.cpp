#include "bench.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "diag.hpp"

namespace ibmc {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

BenchMode parse_mode(const std::string& token) {
  BenchMode m;
  m.token = token;
  std::istringstream is(token);
  std::string piece;
  bool first = true;
  while (std::getline(is, piece, '+')) {
    if (first) {
      if (piece == "i")
        m.incremental = true;
      else if (piece != "ni")
        throw UsageError("mode must start with 'i' or 'ni': " + token);
      first = false;
      continue;
    }
    if (piece == "s")
      m.slice = true;
    else if (piece == "p")
      m.preprocess = true;
    else if (piece == "r")
      m.refine = true;
    else if (piece == "k")
      m.kinduction = true;
    else
      throw UsageError("unknown mode feature '+" + piece + "' in " + token);
  }
  if (first) throw UsageError("empty mode token");
  return m;
}

std::vector<std::string> mode_flags(const BenchMode& m) {
  std::vector<std::string> f;
  if (m.incremental) f.push_back("--incremental");
  if (m.slice) f.push_back("--slice-formula");
  if (!m.preprocess) f.push_back("--no-sat-preprocessor");
  if (m.refine) f.push_back("--refine");
  if (m.kinduction) f.push_back("--k-induction");
  return f;
}

namespace {

std::map<std::string, std::string> read_kv(const std::string& path) {
  std::map<std::string, std::string> kv;
  std::ifstream is(path);
  std::string line;
  while (std::getline(is, line)) {
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

std::map<std::string, std::string> parse_result_line(
    const std::string& output) {
  std::map<std::string, std::string> kv;
  std::istringstream is(output);
  std::string line;
  while (std::getline(is, line)) {
    if (line.rfind("RESULT ", 0) != 0) continue;
    std::istringstream ls(line.substr(7));
    std::string tok;
    while (ls >> tok) {
      auto eq = tok.find('=');
      if (eq != std::string::npos)
        kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
  }
  return kv;
}

struct ChildJob {
  std::string bench;
  std::string mode;
  std::vector<std::string> argv;
  std::map<std::string, std::string> expect;

  pid_t pid = -1;
  int out_fd = -1;
  std::string output;
  Clock::time_point deadline;
  bool killed = false;
  int exit_code = -1;
  long rss_kb = 0;
  bool done = false;
};

void spawn(ChildJob& j, const std::string& exe, double timeout_s) {
  int pipefd[2];
  if (pipe(pipefd) != 0) throw std::runtime_error("pipe failed");
  pid_t pid = fork();
  if (pid < 0) throw std::runtime_error("fork failed");
  if (pid == 0) {
    dup2(pipefd[1], STDOUT_FILENO);
    dup2(pipefd[1], STDERR_FILENO);
    close(pipefd[0]);
    close(pipefd[1]);
    std::vector<char*> argv;
    argv.push_back(const_cast<char*>(exe.c_str()));
    for (const auto& a : j.argv) argv.push_back(const_cast<char*>(a.c_str()));
    argv.push_back(nullptr);
    execv(exe.c_str(), argv.data());
    _exit(127);
  }
  close(pipefd[1]);
  fcntl(pipefd[0], F_SETFL, O_NONBLOCK);
  j.pid = pid;
  j.out_fd = pipefd[0];
  j.deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                  std::chrono::duration<double>(timeout_s));
}

void drain(ChildJob& j) {
  if (j.out_fd < 0) return;
  char buf[4096];
  for (;;) {
    ssize_t n = read(j.out_fd, buf, sizeof(buf));
    if (n <= 0) break;
    j.output.append(buf, size_t(n));
  }
}

}  // namespace

BenchReport bench_compare(const std::string& dir,
                          const std::vector<std::string>& modes,
                          const std::string& out_csv, int jobs,
                          double timeout_s, const std::string& self_exe) {
  std::vector<std::pair<std::string, std::string>> benches;  // name, path
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".rsl") continue;
    benches.emplace_back(entry.path().stem().string(), entry.path().string());
  }
  std::sort(benches.begin(), benches.end());
  if (benches.empty())
    throw UsageError("no .rsl benchmarks found in " + dir);

  std::vector<BenchMode> parsed;
  for (const auto& m : modes) parsed.push_back(parse_mode(m));

  std::vector<ChildJob> queue;
  for (const auto& [name, path] : benches) {
    std::string expect_path = path.substr(0, path.size() - 4) + ".expect";
    auto expect = read_kv(expect_path);
    for (const auto& m : parsed) {
      ChildJob j;
      j.bench = name;
      j.mode = m.token;
      j.expect = expect;
      j.argv = {"check", path, "--stats", "--quiet"};
      for (const auto& f : mode_flags(m)) j.argv.push_back(f);
      auto it = expect.find("kmax");
      if (it != expect.end()) {
        j.argv.push_back("--unwind-max");
        j.argv.push_back(it->second);
      }
      queue.push_back(std::move(j));
    }
  }

  // Process pool; each run is isolated so a crash or timeout cannot
  // corrupt the others.
  size_t next = 0;
  std::vector<size_t> running;
  while (next < queue.size() || !running.empty()) {
    while (int(running.size()) < std::max(jobs, 1) && next < queue.size()) {
      spawn(queue[next], self_exe, timeout_s);
      running.push_back(next);
      ++next;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
    for (auto it = running.begin(); it != running.end();) {
      ChildJob& j = queue[*it];
      drain(j);
      int status = 0;
      struct rusage ru;
      pid_t r = wait4(j.pid, &status, WNOHANG, &ru);
      if (r == j.pid) {
        drain(j);
        close(j.out_fd);
        j.out_fd = -1;
        j.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        j.rss_kb = ru.ru_maxrss;
        j.done = true;
        it = running.erase(it);
        continue;
      }
      if (Clock::now() >= j.deadline && !j.killed) {
        kill(j.pid, SIGKILL);
        j.killed = true;
      }
      ++it;
    }
  }

  BenchReport rep;
  for (const ChildJob& j : queue) {
    BenchRecord rec;
    rec.benchmark = j.bench;
    rec.mode = j.mode;
    rec.peak_mem_kb = uint64_t(j.rss_kb);
    if (j.killed) {
      rec.verdict = "timeout";
      ++rep.timeouts;
    } else {
      auto kv = parse_result_line(j.output);
      if (kv.count("verdict")) {
        rec.verdict = kv["verdict"];
        rec.depth = std::stoi(kv.count("depth") ? kv["depth"] : "-1");
        rec.wall_ms = std::stod(kv.count("wall_ms") ? kv["wall_ms"] : "0");
        rec.solve_ms = std::stod(kv.count("solve_ms") ? kv["solve_ms"] : "0");
        rec.clauses =
            std::stoull(kv.count("clauses") ? kv["clauses"] : "0");
        rec.vars = std::stoull(kv.count("vars") ? kv["vars"] : "0");
        rec.solves = std::stoull(kv.count("solves") ? kv["solves"] : "0");
        if (kv.count("peak_mem_kb"))
          rec.peak_mem_kb = std::stoull(kv["peak_mem_kb"]);
        rec.completed = rec.verdict == "counterexample" ||
                        rec.verdict == "bounded_safe" ||
                        rec.verdict == "proved";
        auto ev = j.expect.find("verdict");
        auto ed = j.expect.find("depth");
        rec.expected_ok = rec.completed && ev != j.expect.end() &&
                          ev->second == rec.verdict &&
                          (ed == j.expect.end() ||
                           std::stoi(ed->second) == rec.depth);
        // Proving a property expected bounded-safe is fine for +k modes.
        if (!rec.expected_ok && rec.verdict == "proved" &&
            ev != j.expect.end() && ev->second == "bounded_safe")
          rec.expected_ok = true;
        if (!rec.expected_ok && rec.completed) ++rep.mismatches;
      } else {
        rec.verdict = "error";
      }
    }
    rep.records.push_back(std::move(rec));
  }

  // CSV, fixed schema.
  if (!out_csv.empty()) {
    std::ofstream os(out_csv);
    os << "benchmark,mode,verdict,depth,wall_ms,solve_ms,clauses,vars,"
          "solves,peak_mem_kb\n";
    for (const auto& r : rep.records)
      os << r.benchmark << "," << r.mode << "," << r.verdict << ","
         << r.depth << "," << r.wall_ms << "," << r.solve_ms << ","
         << r.clauses << "," << r.vars << "," << r.solves << ","
         << r.peak_mem_kb << "\n";
  }

  // Pair each incremental mode with its non-incremental twin.
  auto find_record = [&](const std::string& b,
                         const std::string& m) -> const BenchRecord* {
    for (const auto& r : rep.records)
      if (r.benchmark == b && r.mode == m) return &r;
    return nullptr;
  };
  double log_sum = 0, sum = 0;
  int count = 0;
  for (const auto& m : parsed) {
    if (!m.incremental) continue;
    std::string twin = "ni" + m.token.substr(1);
    for (const auto& [name, path] : benches) {
      const BenchRecord* ri = find_record(name, m.token);
      const BenchRecord* rn = find_record(name, twin);
      if (!ri || !rn || !ri->completed || !rn->completed) continue;
      double sp = rn->wall_ms / std::max(ri->wall_ms, 0.01);
      rep.pairs.push_back(BenchReport::Pair{name, m.token, twin, sp});
      log_sum += std::log(sp);
      sum += sp;
      ++count;
    }
  }
  if (count > 0) {
    rep.geo_mean = std::exp(log_sum / count);
    rep.arith_mean = sum / count;
  }
  return rep;
}

std::string render_report(const BenchReport& rep) {
  std::ostringstream os;
  os << "benchmark                 mode         verdict          depth  "
        "wall_ms   solve_ms  clauses   solves\n";
  for (const auto& r : rep.records) {
    char line[256];
    snprintf(line, sizeof(line), "%-25s %-12s %-16s %5d %9.1f %10.1f %8llu %8llu\n",
             r.benchmark.c_str(), r.mode.c_str(), r.verdict.c_str(), r.depth,
             r.wall_ms, r.solve_ms,
             static_cast<unsigned long long>(r.clauses),
             static_cast<unsigned long long>(r.solves));
    os << line;
  }
  if (!rep.pairs.empty()) {
    os << "\nincremental vs non-incremental (wall time)\n";
    for (const auto& p : rep.pairs) {
      char line[256];
      snprintf(line, sizeof(line), "  %-25s %-10s vs %-10s  speedup %.2fx\n",
               p.bench.c_str(), p.i_mode.c_str(), p.ni_mode.c_str(),
               p.speedup);
      os << line;
    }
    os << "geometric mean speedup: " << rep.geo_mean << "\n";
    os << "arithmetic mean speedup: " << rep.arith_mean << "\n";
  }
  if (rep.timeouts) os << "timeouts: " << rep.timeouts << "\n";
  if (rep.mismatches) os << "expectation mismatches: " << rep.mismatches << "\n";
  return os.str();
}

}  // namespace ibmc
