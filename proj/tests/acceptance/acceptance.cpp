// Acceptance suite: one PASS/FAIL line per criterion. An optional argument
// names a directory for the JSON reports.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "moat/io.hpp"
#include "moatlab/experiments.hpp"

using namespace moatlab;
using Clock = std::chrono::steady_clock;

namespace {

struct Timed {
  Report report;
  double total = 0;
  double slowest = 0;  // longest gap between progress ticks
};

Timed timed(Report (*fn)(const ExperimentOptions&), ExperimentOptions opt) {
  Timed out;
  auto start = Clock::now();
  auto last = start;
  opt.progress = [&](const std::string&) {
    auto now = Clock::now();
    out.slowest = std::max(out.slowest, std::chrono::duration<double>(now - last).count());
    last = now;
  };
  out.report = fn(opt);
  out.total = std::chrono::duration<double>(Clock::now() - start).count();
  return out;
}

bool line(int criterion, const std::string& title, bool ok, std::size_t assertions, const std::string& timing) {
  std::printf("criterion %d: %s  %s (%zu assertions, %s)\n", criterion, ok ? "PASS" : "FAIL", title.c_str(),
              assertions, timing.c_str());
  std::fflush(stdout);
  return ok;
}

std::string seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1fs", s);
  return buf;
}

void print_failures(const Report& r, int criterion) {
  for (const auto& a : r.assertions)
    if (a.criterion == criterion && !a.pass) std::cerr << "  failed: " << a.name << " " << a.detail.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  std::optional<std::filesystem::path> out_dir;
  if (argc > 1) {
    out_dir = argv[1];
    std::filesystem::create_directories(*out_dir);
  }
  ExperimentOptions opt;
  opt.seed = 1;
  opt.caps = moat::caps_from_env();
  bool all = true;

  auto c1 = timed(mst_optimal_712, opt);
  bool ok1 = c1.report.pass(1) && c1.slowest < 60;
  if (!ok1) print_failures(c1.report, 1);
  all &= line(1, "MST-optimal 7/12", ok1, c1.report.count(1), "slowest instance " + seconds(c1.slowest));

  auto c2 = timed(gap_1898, opt);
  bool ok2 = c2.report.pass(2) && c2.total < 1;
  if (!ok2) print_failures(c2.report, 2);
  all &= line(2, "gap integral", ok2, c2.report.count(2), seconds(c2.total));

  auto c3 = timed(lower_bound_712, opt);
  bool ok3 = c3.report.pass(3) && c3.total < 300;
  if (!ok3) print_failures(c3.report, 3);
  all &= line(3, "lower bound 7/12 + eps", ok3, c3.report.count(3), seconds(c3.total));

  auto c4 = timed(gadget_lemmas, opt);
  bool ok4 = c4.report.pass(4) && c4.total < 60;
  if (!ok4) print_failures(c4.report, 4);
  all &= line(4, "gadget lemmas", ok4, c4.report.count(4), seconds(c4.total));

  auto c5 = timed(oracle_chain, opt);
  bool ok5 = c5.report.pass(5) && c5.total < 600;
  if (!ok5) print_failures(c5.report, 5);
  all &= line(5, "oracle chain", ok5, c5.report.count(5), seconds(c5.total));

  bool ok6 = c5.report.pass(6);
  if (!ok6) print_failures(c5.report, 6);
  all &= line(6, "weak duality", ok6, c5.report.count(6), "shared with criterion 5");

  auto c7 = timed(subdivision_invariance, opt);
  bool ok7 = c7.report.pass(7) && c7.total < 120;
  if (!ok7) print_failures(c7.report, 7);
  all &= line(7, "subdivision invariance", ok7, c7.report.count(7), seconds(c7.total));

  bool ok8 = c1.report.pass(8) && c5.report.pass(8);
  if (!ok8) {
    print_failures(c1.report, 8);
    print_failures(c5.report, 8);
  }
  all &= line(8, "safety property", ok8, c1.report.count(8) + c5.report.count(8), "shared with criteria 1 and 5");

  if (out_dir) {
    for (const Timed* t : {&c1, &c2, &c3, &c4, &c5, &c7})
      moat::write_file(*out_dir / (t->report.experiment + ".json"), t->report.to_json());
  }
  return all ? 0 : 1;
}
