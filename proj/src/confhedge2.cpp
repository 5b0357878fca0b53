#include "confhedge/confhedge2.hpp"

#include <algorithm>

#include "confhedge/confhedge1.hpp"

namespace confhedge {

void ForecastRound::validate() const {
  if (forecasts.empty() || forecasts.size() != confidences.size())
    throw std::invalid_argument("ForecastRound: dimension mismatch");
  double mass = 0.0;
  for (double p : confidences) {
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("ForecastRound: confidence outside [0,1]");
    mass += p;
  }
  if (!(mass > 0.0)) throw std::invalid_argument("ForecastRound: zero confidence mass");
  for (double c : forecasts)
    if (!std::isfinite(c)) throw std::invalid_argument("ForecastRound: non-finite forecast");
  if (!std::isfinite(outcome)) throw std::invalid_argument("ForecastRound: non-finite outcome");
}

LossFunction LossFunction::biased_absolute(double mu1, double mu2) {
  if (!(mu1 > 0.0 && mu2 > 0.0))
    throw std::invalid_argument("LossFunction: biased multipliers must be positive");
  LossFunction f;
  f.kind = Kind::BiasedAbsolute;
  f.mu_under = mu1;
  f.mu_over = mu2;
  return f;
}

LossFunction LossFunction::pluggable(std::function<double(double, double)> f) {
  LossFunction lf;
  lf.kind = Kind::Pluggable;
  lf.fn = std::move(f);
  return lf;
}

double evaluate_loss(const LossFunction& fn, double outcome, double forecast) {
  const double r = outcome - forecast;
  switch (fn.kind) {
    case LossFunction::Kind::Absolute:
      return std::abs(r);
    case LossFunction::Kind::BiasedAbsolute:
      return fn.mu_under * (-std::min(0.0, r)) + fn.mu_over * std::max(0.0, r);
    case LossFunction::Kind::Pluggable: {
      const double v = fn.fn(outcome, forecast);
      if (!std::isfinite(v)) throw std::domain_error("evaluate_loss: non-finite pluggable loss");
      return v;
    }
  }
  throw std::logic_error("evaluate_loss: unknown kind");
}

double aggregate_forecast(const WeightDistribution& posterior,
                          std::span<const double> confidences,
                          std::span<const double> forecasts) {
  // identical algebra to the fixed-point algorithm loss
  return algorithm_loss(posterior, confidences, forecasts);
}

ForecastStep step(const LearnerState& state, const ForecastRound& round,
                  const LossFunction& fn, const MixingScheme& scheme) {
  round.validate();
  if (round.size() != state.n_experts) throw std::invalid_argument("step: dimension mismatch");
  const double eta = state.learning_rate;
  const std::size_t t = state.round + 1;

  const double gamma = aggregate_forecast(state.posterior, round.confidences, round.forecasts);
  const double a = evaluate_loss(fn, round.outcome, gamma);

  Vec losses(round.size());
  for (std::size_t i = 0; i < round.size(); ++i)
    losses[i] = evaluate_loss(fn, round.outcome, round.forecasts[i]);

  // convexity spot check on encountered forecast pairs
  bool warning = false;
  if (fn.kind == LossFunction::Kind::Pluggable) {
    for (std::size_t i = 0; i + 1 < round.size() && !warning; ++i) {
      const double mid = 0.5 * (round.forecasts[i] + round.forecasts[i + 1]);
      if (evaluate_loss(fn, round.outcome, mid) >
          0.5 * (losses[i] + losses[i + 1]) + 1e-9)
        warning = true;
    }
  }

  // Loss Update with exponents p_i (l_i - a_t)
  Vec exps(round.size());
  for (std::size_t i = 0; i < round.size(); ++i)
    exps[i] = round.confidences[i] * (losses[i] - a);
  WeightDistribution w_mu = stable_exp_weights(state.posterior, exps, eta);

  // Mixing Update
  MixingMemory memory = state.memory;
  WeightDistribution posterior_next = apply_mixing(scheme, w_mu, memory, t + 1);

  // Learning Parameter Update
  const double m = a + mixloss(state.posterior, exps, eta);
  const double h = a + dot(state.posterior, exps);  // sum w (p l + (1-p) a)
  const double delta = std::max(0.0, h - m);
  const double gap_next = state.cumulative_gap + delta;
  const double eta_next = gap_next > 0.0 ? state.ln_star_n / gap_next : kInfinity;

  RoundRecord rec;
  rec.hedge_loss = h;
  rec.forecast_loss = a;
  rec.mixloss = m;
  rec.gap = delta;
  rec.learning_rate_used = eta;
  rec.prediction = prediction_weights(state.posterior, round.confidences);
  auto [lo, hi] = std::minmax_element(losses.begin(), losses.end());
  rec.loss_min = *lo;
  rec.loss_max = *hi;
  rec.loss_range = *hi - *lo;
  const Vec eff = effective_losses(round.confidences, losses, a);
  rec.weight_variance = weighted_variance(state.posterior, eff);

  LearnerState next{t,        std::move(posterior_next), gap_next,
                    eta_next, std::move(memory),         state.n_experts,
                    state.ln_star_n};
  return {gamma, std::move(rec), std::move(next), warning};
}

}  // namespace confhedge
