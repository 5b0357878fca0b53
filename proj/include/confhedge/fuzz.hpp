#pragma once

#include <cstdint>

#include "confhedge/confhedge1.hpp"
#include "confhedge/regret.hpp"

namespace confhedge {

/// Randomized adversarial trial generator and per-trial checker for the
/// published bounds and the per-round lemma diagnostics.
struct FuzzConfig {
  std::size_t trials = 1000;
  std::size_t max_experts = 8;
  std::size_t max_horizon = 500;
  bool rescale = true;  // multiply some streams by 1e+3 / 1e-3
  std::uint64_t seed = 1;
};

struct TrialResult {
  std::size_t id = 0;
  std::size_t n_experts = 0;
  std::size_t horizon = 0;
  std::size_t switches = 0;
  double regret = 0.0;
  BoundReport bounds;
  bool eq7_ok = true, eq8_ok = true, eq9_ok = true, eq10_ok = true, eq11_ok = true;
  bool lemma3_ok = true;   // prefix bound H - L^(q) <= gamma * Delta
  bool lemma4_ok = true;   // per-round delta <= g(s eta)/s * v
  bool lemma5_ok = true;   // prefix Delta^2 <= ln*N V + (2/3 ln*N + 1) S Delta
  bool lemma6_ok = true;   // variance bound where L^(q) <= H
  bool gap_ok = true;      // delta >= 0, Delta nondecreasing, eta nonincreasing

  bool bounds_ok() const { return eq7_ok && eq8_ok && eq9_ok && eq10_ok && eq11_ok; }
  bool all_ok() const {
    return bounds_ok() && lemma3_ok && lemma4_ok && lemma5_ok && lemma6_ok && gap_ok;
  }
};

struct Trial {
  std::vector<RoundInput> rounds;
  ComparatorSequence comparators;
};

/// Deterministic per-trial stream; reproducible for a violation dump.
Trial generate_trial(const FuzzConfig& config, std::size_t trial_id);

TrialResult run_trial(const Trial& trial, std::size_t trial_id);

/// Serial reference path.
std::vector<TrialResult> run_fuzz_serial(const FuzzConfig& config);

/// OpenMP path; falls back to serial when built without OpenMP.
/// `max_threads` = 0 means the runtime default (capped by the
/// CONFHEDGE_THREADS environment variable in the CLI).
std::vector<TrialResult> run_fuzz(const FuzzConfig& config, int max_threads = 0);

}  // namespace confhedge
