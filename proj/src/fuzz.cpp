#include "confhedge/fuzz.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <algorithm>
#include <cmath>

#include "confhedge/rng.hpp"

namespace confhedge {

Trial generate_trial(const FuzzConfig& config, std::size_t trial_id) {
  Rng rng(Rng::derive_seed(config.seed, trial_id));
  const std::size_t n = 1 + rng.uniform_index(config.max_experts);
  const std::size_t horizon = 1 + rng.uniform_index(config.max_horizon);

  double scale = 1.0;
  if (config.rescale) {
    const auto pick = rng.uniform_index(4);
    if (pick == 0) scale = 1e3;
    if (pick == 1) scale = 1e-3;
  }

  Trial trial;
  trial.rounds.reserve(horizon);
  for (std::size_t t = 0; t < horizon; ++t) {
    RoundInput in;
    in.losses.resize(n);
    in.confidences.resize(n);
    for (std::size_t i = 0; i < n; ++i) in.losses[i] = scale * rng.uniform(-10.0, 10.0);
    double mass = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      in.confidences[i] = rng.uniform();
      mass += in.confidences[i];
    }
    if (!(mass > 1e-6)) in.confidences[rng.uniform_index(n)] = 1.0;  // keep ||p||_1 > 0
    trial.rounds.push_back(std::move(in));
  }

  // comparator: unit-vector segments with k switches
  static constexpr std::size_t kChoices[] = {0, 1, 2, 5};
  std::size_t k = kChoices[rng.uniform_index(4)];
  k = std::min(k, horizon - 1);
  std::vector<std::size_t> boundaries{0};
  while (boundaries.size() < k + 1) {
    const std::size_t b = 1 + rng.uniform_index(horizon - 1);
    if (std::find(boundaries.begin(), boundaries.end(), b) == boundaries.end())
      boundaries.push_back(b);
  }
  std::sort(boundaries.begin(), boundaries.end());
  boundaries.push_back(horizon);

  std::size_t prev_expert = n;  // out of range sentinel
  for (std::size_t seg = 0; seg + 1 < boundaries.size(); ++seg) {
    std::size_t expert = rng.uniform_index(n);
    if (n > 1 && expert == prev_expert) expert = (expert + 1) % n;  // force a real switch
    prev_expert = expert;
    Vec q(n, 0.0);
    q[expert] = 1.0;
    const WeightDistribution qd(std::move(q));
    for (std::size_t t = boundaries[seg]; t < boundaries[seg + 1]; ++t)
      trial.comparators.push_back(qd);
  }
  return trial;
}

TrialResult run_trial(const Trial& trial, std::size_t trial_id) {
  const std::size_t n = trial.rounds.front().size();
  const std::size_t T = trial.rounds.size();
  const MixingScheme scheme{MixingVariant::FixedShare, AlphaSchedule::inverse_t()};
  const double lnstar = ln_star(n);

  TrialResult res;
  res.id = trial_id;
  res.n_experts = n;
  res.horizon = T;

  LearnerState state = LearnerState::initial(n);
  RegretLedger ledger(n);
  double prev_eta = kInfinity;

  for (std::size_t t = 0; t < T; ++t) {
    AllocationStep out = step(state, trial.rounds[t], scheme);
    const RoundRecord& rec = out.record;

    if (rec.gap < 0.0 || out.next_state.cumulative_gap + 1e-12 < state.cumulative_gap ||
        out.next_state.learning_rate > prev_eta * (1.0 + 1e-12))
      res.gap_ok = false;
    prev_eta = out.next_state.learning_rate;

    // Lemma 4, per round: delta <= g(s eta)/s * v (finite eta, s > 0)
    const double eta = rec.learning_rate_used;
    if (std::isfinite(eta) && rec.loss_range > 0.0) {
      const double rhs = bernstein_g(rec.loss_range * eta) / rec.loss_range *
                         rec.weight_variance;
      const double slack = 1e-9 * std::max({1.0, std::abs(rhs), rec.loss_range});
      if (rec.gap > rhs + slack) res.lemma4_ok = false;
    }

    ledger.add_round(rec, trial.rounds[t].losses, trial.rounds[t].confidences,
                     &trial.comparators[t]);

    const double S = ledger.max_range();
    const double scale = std::max(1.0, S * static_cast<double>(t + 1));

    // Lemma 5 prefix: Delta^2 <= ln*N V + (2/3 ln*N + 1) S Delta
    const double dT = ledger.cum_gap();
    const double l5 = lnstar * ledger.cum_variance() +
                      ((2.0 / 3.0) * lnstar + 1.0) * S * dT;
    if (dT * dT > l5 + 1e-9 * std::max(1.0, scale * scale)) res.lemma5_ok = false;

    // Lemma 3 prefix: H - L^(q) <= (k+2)(ln T + 1) Delta
    const double gamma =
        gamma_coefficient(ledger.switches(), ledger.rounds(), MixingVariant::FixedShare);
    const double excess = ledger.cum_hedge_loss() - ledger.comparator_effective();
    if (excess > gamma * dT + 1e-9 * scale) res.lemma3_ok = false;

    // Lemma 6 prefix, precondition L^(q) <= H
    const double Lq = ledger.comparator_effective();
    if (Lq <= ledger.cum_hedge_loss() && ledger.cum_max() > ledger.cum_min()) {
      const double q_ratio = (ledger.cum_max() - Lq) * (Lq - ledger.cum_min()) /
                             (ledger.cum_max() - ledger.cum_min());
      const double rhs = S * std::max(0.0, q_ratio) + gamma * S * dT;
      if (ledger.cum_variance() > rhs + 1e-9 * std::max(1.0, scale * scale))
        res.lemma6_ok = false;
    }

    state = std::move(out.next_state);
  }

  res.switches = ledger.switches();
  res.regret = ledger.regret();
  res.bounds = bound_values(ledger, n, MixingVariant::FixedShare);
  const double tol = 1e-9 * std::max(1.0, std::abs(res.regret));
  res.eq7_ok = res.regret <= res.bounds.eq7 + tol;
  res.eq8_ok = res.regret <= res.bounds.eq8 + tol;
  res.eq9_ok = res.regret <= res.bounds.eq9 + tol;
  res.eq10_ok = res.regret <= res.bounds.eq10 + tol;
  res.eq11_ok = res.regret <= res.bounds.eq11 + tol;
  return res;
}

std::vector<TrialResult> run_fuzz_serial(const FuzzConfig& config) {
  std::vector<TrialResult> out(config.trials);
  for (std::size_t i = 0; i < config.trials; ++i)
    out[i] = run_trial(generate_trial(config, i), i);
  return out;
}

std::vector<TrialResult> run_fuzz(const FuzzConfig& config, int max_threads) {
  std::vector<TrialResult> out(config.trials);
#ifdef _OPENMP
  if (max_threads > 0) omp_set_num_threads(max_threads);
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < static_cast<long long>(config.trials); ++i)
    out[i] = run_trial(generate_trial(config, i), i);
#else
  (void)max_threads;
  out = run_fuzz_serial(config);
#endif
  return out;
}

}  // namespace confhedge
