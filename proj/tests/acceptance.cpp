// Acceptance run: one line per criterion, nonzero exit on any failure.

#include "polyspace/verify.hpp"

#include <cstdio>
#include <cstdlib>
#include <thread>

int main() {
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char *env = std::getenv("POLYSPACE_THREADS"))
    threads = static_cast<unsigned>(std::max(1, std::atoi(env)));
  int failed = 0;
  for (const auto &r : polyspace::verify::run_all(threads)) {
    std::printf("[%s] %d. %s (%.2fs): %s\n", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds,
                r.detail.c_str());
    std::fflush(stdout);
    failed += !r.passed;
  }
  std::printf("%d/9 criteria passed\n", 9 - failed);
  return failed == 0 ? 0 : 1;
}
