#pragma once

#include "confhedge/core.hpp"
#include "confhedge/mixing.hpp"

namespace confhedge {

/// Shared state of both learners. `round` counts completed rounds;
/// eta_1 = +inf and stays infinite while the cumulative gap is zero.
struct LearnerState {
  std::size_t round = 0;
  WeightDistribution posterior;
  double cumulative_gap = 0.0;
  double learning_rate = kInfinity;
  MixingMemory memory;
  std::size_t n_experts = 0;
  double ln_star_n = 1.0;

  static LearnerState initial(std::size_t n) {
    return {0, WeightDistribution::uniform(n), 0.0, kInfinity,
            MixingMemory::initial(n), n, ln_star(n)};
  }
};

}  // namespace confhedge
