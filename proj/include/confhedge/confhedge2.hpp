#pragma once

#include <functional>

#include "confhedge/learner_state.hpp"

namespace confhedge {

/// One round of the forecast-aggregation game.
struct ForecastRound {
  Vec forecasts;    // c_t
  Vec confidences;  // p_t
  double outcome = 0.0;  // omega_t

  std::size_t size() const { return forecasts.size(); }
  void validate() const;
};

/// Convex-in-forecast loss. Pluggable losses are declared convex by the
/// caller and spot-checked per round with a midpoint test.
struct LossFunction {
  enum class Kind { Absolute, BiasedAbsolute, Pluggable };
  Kind kind = Kind::Absolute;
  double mu_under = 1.0;  // mu_1, penalty when forecast overshoots (omega - gamma < 0)
  double mu_over = 1.0;   // mu_2, penalty when forecast undershoots
  std::function<double(double outcome, double forecast)> fn;

  static LossFunction absolute() { return {}; }
  static LossFunction biased_absolute(double mu1, double mu2);
  static LossFunction pluggable(std::function<double(double, double)> f);
};

double evaluate_loss(const LossFunction& fn, double outcome, double forecast);

/// gamma_t = sum(p w c) / sum(p w).
double aggregate_forecast(const WeightDistribution& posterior,
                          std::span<const double> confidences,
                          std::span<const double> forecasts);

struct ForecastStep {
  double forecast = 0.0;  // gamma_t
  RoundRecord record;     // carries both a_t (forecast_loss) and h_t
  LearnerState next_state;
  bool convexity_warning = false;
};

ForecastStep step(const LearnerState& state, const ForecastRound& round,
                  const LossFunction& fn, const MixingScheme& scheme);

}  // namespace confhedge
