// Runs every property suite and prints one line per suite.

#include <cstdio>
#include <cstdlib>
#include <string>

#include "diffs1/verify.hpp"

int main(int argc, char** argv) {
  diffs1::VerifyOptions opt;
  bool verbose = false;
  std::string only;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "-v") verbose = true;
    else only = a;
  }
  int failed = 0;
  int index = 0;
  for (const auto& name : diffs1::suite_names()) {
    ++index;
    if (!only.empty() && only != name) continue;
    const auto r = diffs1::run_suite(name, opt);
    std::printf("[%s] %2d %-20s (%.1f s)\n", r.pass ? "PASS" : "FAIL", index, name.c_str(), r.seconds);
    for (const auto& c : r.checks) {
      if (!verbose && c.pass) continue;
      std::printf("       %s %-70s %.3e %s %.1e %s\n", c.pass ? "ok  " : "FAIL", c.name.c_str(), c.value,
                  c.upper_bound ? "<=" : ">", c.threshold, c.detail.c_str());
    }
    std::fflush(stdout);
    if (!r.pass) ++failed;
  }
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
