#pragma once

#include <utility>

#include "confhedge/core.hpp"

namespace confhedge {

enum class MixingVariant { None, FixedShare, UniformPast };

/// Schedule for the share parameter alpha_t.
struct AlphaSchedule {
  enum class Kind { InverseT, Constant };
  Kind kind = Kind::InverseT;
  double value = 0.0;  // Constant only

  static AlphaSchedule inverse_t() { return {Kind::InverseT, 0.0}; }
  static AlphaSchedule constant(double v);
};

struct MixingScheme {
  MixingVariant variant = MixingVariant::FixedShare;
  AlphaSchedule alpha = AlphaSchedule::inverse_t();
};

/// Running uniform average of the loss-updated weights w_0^mu ... w_{t-1}^mu,
/// maintained only for the UniformPast scheme. w_0^mu = uniform is included
/// from the start.
struct MixingMemory {
  WeightDistribution past_mean;
  std::size_t count;

  static MixingMemory initial(std::size_t n) {
    return {WeightDistribution::uniform(n), 1};
  }
};

/// alpha used to produce w_t from w_{t-1}^mu; first use is t = 2.
double alpha_at(const AlphaSchedule& schedule, std::size_t t);

WeightDistribution fixed_share_mix(const WeightDistribution& w_mu, double alpha);

std::pair<WeightDistribution, MixingMemory> uniform_past_mix(
    const WeightDistribution& w_mu, const MixingMemory& memory, double alpha);

/// Dispatch on the scheme; t_next is the round index of the produced
/// posterior (>= 2). Updates memory in place for UniformPast.
WeightDistribution apply_mixing(const MixingScheme& scheme, const WeightDistribution& w_mu,
                                MixingMemory& memory, std::size_t t_next);

}  // namespace confhedge
