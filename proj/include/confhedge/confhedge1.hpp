#pragma once

#include "confhedge/learner_state.hpp"

namespace confhedge {

struct AllocationStep {
  WeightDistribution prediction;  // w_t^*
  RoundRecord record;
  LearnerState next_state;
};

/// w*_i = w_i p_i / sum_j w_j p_j.
WeightDistribution prediction_weights(const WeightDistribution& posterior,
                                      std::span<const double> confidences);

/// h_t by the closed form sum(w p l) / sum(w p); solves the fixed point
/// h = sum_i w_i (p_i l_i + (1 - p_i) h).
double algorithm_loss(const WeightDistribution& posterior,
                      std::span<const double> confidences,
                      std::span<const double> losses);

/// p_i l_i + (1 - p_i) h componentwise.
Vec effective_losses(std::span<const double> confidences, std::span<const double> losses,
                     double h);

/// Exponential loss update with exponents p_i (l_i - h).
WeightDistribution loss_update(const WeightDistribution& posterior,
                               std::span<const double> confidences,
                               std::span<const double> losses, double h, double eta);

/// One full round: predict, allocate, loss update, mixing update,
/// learning parameter update.
AllocationStep step(const LearnerState& state, const RoundInput& input,
                    const MixingScheme& scheme);

}  // namespace confhedge
