#include "confhedge/confhedge1.hpp"

#include <algorithm>

namespace confhedge {

WeightDistribution prediction_weights(const WeightDistribution& posterior,
                                      std::span<const double> confidences) {
  const std::size_t n = posterior.size();
  if (confidences.size() != n)
    throw std::invalid_argument("prediction_weights: dimension mismatch");
  Vec out(n);
  double z = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = posterior[i] * confidences[i];
    z += out[i];
  }
  if (!(z > 0.0))
    throw std::domain_error("prediction_weights: dead ensemble (all awake experts have zero mass)");
  for (double& v : out) v /= z;
  return WeightDistribution(std::move(out));
}

double algorithm_loss(const WeightDistribution& posterior,
                      std::span<const double> confidences,
                      std::span<const double> losses) {
  const std::size_t n = posterior.size();
  if (confidences.size() != n || losses.size() != n)
    throw std::invalid_argument("algorithm_loss: dimension mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double wp = posterior[i] * confidences[i];
    num += wp * losses[i];
    den += wp;
  }
  if (!(den > 0.0)) throw std::domain_error("algorithm_loss: dead ensemble");
  return num / den;
}

Vec effective_losses(std::span<const double> confidences, std::span<const double> losses,
                     double h) {
  if (confidences.size() != losses.size())
    throw std::invalid_argument("effective_losses: dimension mismatch");
  Vec out(losses.size());
  for (std::size_t i = 0; i < losses.size(); ++i)
    out[i] = confidences[i] * losses[i] + (1.0 - confidences[i]) * h;
  return out;
}

WeightDistribution loss_update(const WeightDistribution& posterior,
                               std::span<const double> confidences,
                               std::span<const double> losses, double h, double eta) {
  Vec exps(posterior.size());
  for (std::size_t i = 0; i < posterior.size(); ++i)
    exps[i] = confidences[i] * (losses[i] - h);
  return stable_exp_weights(posterior, exps, eta);
}

namespace {

// Diagnostics shared by both learners: raw-loss range and the variance of
// the effective losses under the posterior. `base` is h_t (ConfHedge-1) or
// a_t (ConfHedge-2).
void fill_common_record(RoundRecord& rec, const LearnerState& state,
                        std::span<const double> losses,
                        std::span<const double> confidences, double base) {
  auto [lo, hi] = std::minmax_element(losses.begin(), losses.end());
  rec.loss_min = *lo;
  rec.loss_max = *hi;
  rec.loss_range = *hi - *lo;
  const Vec eff = effective_losses(confidences, losses, base);
  rec.weight_variance = weighted_variance(state.posterior, eff);
}

}  // namespace

AllocationStep step(const LearnerState& state, const RoundInput& input,
                    const MixingScheme& scheme) {
  input.validate();
  if (input.size() != state.n_experts) throw std::invalid_argument("step: dimension mismatch");
  const double eta = state.learning_rate;
  const std::size_t t = state.round + 1;

  WeightDistribution wstar = prediction_weights(state.posterior, input.confidences);
  const double h = dot(wstar, input.losses);

  // Loss Update
  WeightDistribution w_mu =
      loss_update(state.posterior, input.confidences, input.losses, h, eta);

  // Mixing Update
  MixingMemory memory = state.memory;
  WeightDistribution posterior_next = apply_mixing(scheme, w_mu, memory, t + 1);

  // Learning Parameter Update; mixloss evaluated over the shifted exponents
  // p_i (l_i - h), which equals m_t - h by shift equivariance.
  Vec exps(input.size());
  for (std::size_t i = 0; i < input.size(); ++i)
    exps[i] = input.confidences[i] * (input.losses[i] - h);
  const double m = h + mixloss(state.posterior, exps, eta);
  const double delta = std::max(0.0, h - m);
  const double gap_next = state.cumulative_gap + delta;
  const double eta_next = gap_next > 0.0 ? state.ln_star_n / gap_next : kInfinity;

  RoundRecord rec;
  rec.hedge_loss = h;
  rec.mixloss = m;
  rec.gap = delta;
  rec.learning_rate_used = eta;
  rec.prediction = wstar;
  fill_common_record(rec, state, input.losses, input.confidences, h);

  LearnerState next{t,         std::move(posterior_next), gap_next,
                    eta_next,  std::move(memory),         state.n_experts,
                    state.ln_star_n};
  return {std::move(wstar), std::move(rec), std::move(next)};
}

}  // namespace confhedge
