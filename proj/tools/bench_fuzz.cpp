// Benchmark: serial reference vs OpenMP-parallel fuzz harness.
// Verifies that both paths produce bitwise-identical trial results, then
// reports wall times and speedup.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "confhedge/fuzz.hpp"

using namespace confhedge;
using clock_type = std::chrono::steady_clock;

int main(int argc, char** argv) {
  FuzzConfig cfg;
  cfg.trials = 500;
  cfg.seed = 99;
  for (int i = 1; i + 1 < argc; i += 2) {
    if (!std::strcmp(argv[i], "--trials"))
      cfg.trials = std::strtoull(argv[i + 1], nullptr, 10);
    else if (!std::strcmp(argv[i], "--seed"))
      cfg.seed = std::strtoull(argv[i + 1], nullptr, 10);
  }

  const auto t0 = clock_type::now();
  const auto serial = run_fuzz_serial(cfg);
  const auto t1 = clock_type::now();
  const auto parallel = run_fuzz(cfg);
  const auto t2 = clock_type::now();

  bool identical = serial.size() == parallel.size();
  for (std::size_t i = 0; identical && i < serial.size(); ++i)
    identical = serial[i].regret == parallel[i].regret &&
                serial[i].bounds.eq7 == parallel[i].bounds.eq7 &&
                serial[i].bounds.eq11 == parallel[i].bounds.eq11 &&
                serial[i].all_ok() == parallel[i].all_ok();

  const double serial_s = std::chrono::duration<double>(t1 - t0).count();
  const double parallel_s = std::chrono::duration<double>(t2 - t1).count();
  std::printf("trials: %zu\n", serial.size());
  std::printf("serial:   %.3f s (%.1f trials/s)\n", serial_s,
              static_cast<double>(serial.size()) / serial_s);
  std::printf("parallel: %.3f s (%.1f trials/s)\n", parallel_s,
              static_cast<double>(parallel.size()) / parallel_s);
  std::printf("speedup:  %.2fx\n", serial_s / parallel_s);
  std::printf("results identical: %s\n", identical ? "yes" : "NO");
  return identical ? 0 : 1;
}
