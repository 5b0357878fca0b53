#include "confhedge/mixing.hpp"

namespace confhedge {

AlphaSchedule AlphaSchedule::constant(double v) {
  if (!(v > 0.0 && v <= 1.0))
    throw std::invalid_argument("AlphaSchedule: constant alpha must lie in (0,1]");
  return {Kind::Constant, v};
}

double alpha_at(const AlphaSchedule& schedule, std::size_t t) {
  if (t < 2) throw std::invalid_argument("alpha_at: first mixing update happens at t = 2");
  switch (schedule.kind) {
    case AlphaSchedule::Kind::InverseT:
      return 1.0 / static_cast<double>(t);
    case AlphaSchedule::Kind::Constant:
      return schedule.value;
  }
  throw std::logic_error("alpha_at: unknown schedule");
}

WeightDistribution fixed_share_mix(const WeightDistribution& w_mu, double alpha) {
  const std::size_t n = w_mu.size();
  Vec out(n);
  const double floor = alpha / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = floor + (1.0 - alpha) * w_mu[i];
  return WeightDistribution(std::move(out));
}

std::pair<WeightDistribution, MixingMemory> uniform_past_mix(
    const WeightDistribution& w_mu, const MixingMemory& memory, double alpha) {
  if (memory.count < 1) throw std::invalid_argument("uniform_past_mix: empty memory");
  const std::size_t n = w_mu.size();
  Vec out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = alpha * memory.past_mean[i] + (1.0 - alpha) * w_mu[i];

  // fold w_mu into the running average
  const double c = static_cast<double>(memory.count);
  Vec mean(n);
  for (std::size_t i = 0; i < n; ++i)
    mean[i] = (c * memory.past_mean[i] + w_mu[i]) / (c + 1.0);
  MixingMemory next{WeightDistribution(std::move(mean)), memory.count + 1};
  return {WeightDistribution(std::move(out)), std::move(next)};
}

WeightDistribution apply_mixing(const MixingScheme& scheme, const WeightDistribution& w_mu,
                                MixingMemory& memory, std::size_t t_next) {
  switch (scheme.variant) {
    case MixingVariant::None:
      return w_mu;
    case MixingVariant::FixedShare:
      return fixed_share_mix(w_mu, alpha_at(scheme.alpha, t_next));
    case MixingVariant::UniformPast: {
      auto [mixed, next] = uniform_past_mix(w_mu, memory, alpha_at(scheme.alpha, t_next));
      memory = std::move(next);
      return mixed;
    }
  }
  throw std::logic_error("apply_mixing: unknown variant");
}

}  // namespace confhedge
