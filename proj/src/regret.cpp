#include "confhedge/regret.hpp"

#include <algorithm>
#include <cmath>

namespace confhedge {

std::size_t switch_count(const ComparatorSequence& q, double tol) {
  std::size_t k = 0;
  for (std::size_t t = 1; t < q.size(); ++t)
    if (!q[t].approx_equal(q[t - 1], tol)) ++k;
  return k;
}

double confidence_regret(std::span<const double> base, const std::vector<Vec>& losses,
                         const std::vector<Vec>& confidences, const ComparatorSequence& q) {
  const std::size_t T = base.size();
  if (losses.size() != T || confidences.size() != T || q.size() != T)
    throw std::invalid_argument("confidence_regret: misaligned sequences");
  double r = 0.0;
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t i = 0; i < q[t].size(); ++i)
      r += q[t][i] * confidences[t][i] * (base[t] - losses[t][i]);
  return r;
}

std::pair<double, double> comparator_envelopes(const std::vector<Vec>& losses,
                                               const std::vector<Vec>& confidences,
                                               const ComparatorSequence& q) {
  const std::size_t T = losses.size();
  if (confidences.size() != T || q.size() != T)
    throw std::invalid_argument("comparator_envelopes: misaligned sequences");
  double lower = 0.0, upper = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    const auto [lo, hi] = std::minmax_element(losses[t].begin(), losses[t].end());
    for (std::size_t i = 0; i < q[t].size(); ++i) {
      const double base = q[t][i] * confidences[t][i] * losses[t][i];
      lower += base + q[t][i] * (1.0 - confidences[t][i]) * (*lo);
      upper += base + q[t][i] * (1.0 - confidences[t][i]) * (*hi);
    }
  }
  return {lower, upper};
}

double gamma_coefficient(std::size_t k, std::size_t T, MixingVariant scheme) {
  if (T < 1) throw std::invalid_argument("gamma_coefficient: T must be >= 1");
  const double lnT = std::log(static_cast<double>(T));
  const double kd = static_cast<double>(k);
  switch (scheme) {
    case MixingVariant::FixedShare:
      return (kd + 2.0) * (lnT + 1.0);
    case MixingVariant::UniformPast:
      return (2.0 * kd + 3.0) * lnT + (kd + 2.0);
    case MixingVariant::None:
      throw std::invalid_argument("gamma_coefficient: no published coefficient for scheme None");
  }
  throw std::logic_error("gamma_coefficient: unknown scheme");
}

RegretLedger::RegretLedger(std::size_t n_experts)
    : n_(n_experts), per_expert_cum_(n_experts, 0.0) {
  if (n_ == 0) throw std::invalid_argument("RegretLedger: need at least one expert");
}

void RegretLedger::add_round(const RoundRecord& rec, std::span<const double> losses,
                             std::span<const double> confidences,
                             const WeightDistribution* comparator) {
  if (losses.size() != n_ || confidences.size() != n_)
    throw std::invalid_argument("RegretLedger: dimension mismatch");
  ++rounds_;
  const double base = rec.forecast_loss ? *rec.forecast_loss : rec.hedge_loss;
  cum_h_ += rec.hedge_loss;
  cum_a_ += base;
  cum_min_ += rec.loss_min;
  cum_max_ += rec.loss_max;
  max_range_ = std::max(max_range_, rec.loss_range);
  sum_sq_range_ += rec.loss_range * rec.loss_range;
  cum_gap_ += rec.gap;
  cum_var_ += rec.weight_variance;
  for (std::size_t i = 0; i < n_; ++i) per_expert_cum_[i] += losses[i];

  if (comparator != nullptr) {
    if (comparator->size() != n_)
      throw std::invalid_argument("RegretLedger: comparator dimension mismatch");
    if (have_prev_q_) {
      for (std::size_t i = 0; i < n_; ++i)
        if (std::abs(prev_q_[i] - (*comparator)[i]) > kSimplexTol) {
          ++switches_;
          break;
        }
    }
    prev_q_ = comparator->weights();
    have_prev_q_ = true;
    for (std::size_t i = 0; i < n_; ++i) {
      const double qi = (*comparator)[i];
      const double p = confidences[i];
      regret_ += qi * p * (base - losses[i]);
      q_lower_ += qi * (p * losses[i] + (1.0 - p) * rec.loss_min);
      q_upper_ += qi * (p * losses[i] + (1.0 - p) * rec.loss_max);
      q_eff_ += qi * (p * losses[i] + (1.0 - p) * base);
    }
  }
}

double RegretLedger::best_expert_loss() const {
  return *std::min_element(per_expert_cum_.begin(), per_expert_cum_.end());
}

namespace {

// (num1 * num2) / den with the 0/0 limit defined as 0.
double guarded_ratio(double num1, double num2, double den) {
  if (den <= 0.0) return 0.0;
  return std::max(0.0, num1) * std::max(0.0, num2) / den;
}

}  // namespace

BoundReport bound_values(const RegretLedger& ledger, std::size_t n_experts,
                         MixingVariant scheme) {
  const double lnstar = ln_star(n_experts);
  const double S = ledger.max_range();
  const double gamma = gamma_coefficient(ledger.switches(), ledger.rounds(), scheme);
  const double Lp = ledger.cum_max();
  const double Lm = ledger.cum_min();
  const double Lqm = ledger.comparator_lower();
  const double Lqp = ledger.comparator_upper();

  BoundReport b;
  const double tail_small = gamma * ((2.0 / 3.0) * lnstar + 1.0) * S;
  const double tail_big = gamma * ((gamma + 2.0 / 3.0) * lnstar + 1.0) * S;

  b.eq7 = 0.5 * gamma * std::sqrt(ledger.sum_sq_range() * lnstar) + tail_small;
  b.eq8 = gamma * std::sqrt(S * guarded_ratio(Lp - Lqm, Lqp - Lm, Lp - Lm) * lnstar) + tail_big;
  b.eq9 = gamma * std::sqrt(S * std::max(0.0, Lqp - Lm) * lnstar) + tail_big;
  b.eq10 = gamma * std::sqrt(S * std::max(0.0, Lp - Lqm) * lnstar) + tail_small;
  b.eq11 = gamma * std::sqrt(S * std::max(0.0, Lp - Lm) * lnstar) + tail_small;

  const double lnN = std::log(static_cast<double>(n_experts));
  const double Lstar = ledger.best_expert_loss();
  b.eq2 = 2.0 * std::sqrt(S * guarded_ratio(Lstar - Lm, Lp - Lstar, Lp - Lm) * lnN) +
          ((16.0 / 3.0) * lnN + 2.0) * S;
  return b;
}

std::map<std::string, double> bound_values_map(const RegretLedger& ledger,
                                               std::size_t n_experts, MixingVariant scheme) {
  const BoundReport b = bound_values(ledger, n_experts, scheme);
  return {{"eq7", b.eq7}, {"eq8", b.eq8},   {"eq9", b.eq9},
          {"eq10", b.eq10}, {"eq11", b.eq11}, {"eq2", b.eq2}};
}

double bernstein_g(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("bernstein_g: x must be positive");
  if (x > 700.0) return kInfinity;
  if (x < 1e-5) return 0.5 * x + x * x / 6.0;  // series, avoids cancellation
  return (std::exp(x) - x - 1.0) / x;
}

double phi_ratio(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("phi_ratio: x must be positive");
  if (x > 700.0) return 1.0 / x;  // e^x dominates both numerator and denominator
  if (x < 1e-3) {
    // series of (e^x - 1 - x - x^2/2) / (x (e^x - 1 - x)) with x^3 factored out
    const double num = 1.0 / 6.0 + x / 24.0 + x * x / 120.0 + x * x * x / 720.0;
    const double den = 0.5 + x / 6.0 + x * x / 24.0 + x * x * x / 120.0;
    return num / den;
  }
  const double em = std::expm1(x);
  return (em - x - 0.5 * x * x) / (x * (em - x));
}

}  // namespace confhedge
