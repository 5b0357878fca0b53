#pragma once

#include <map>
#include <string>

#include "confhedge/learner_state.hpp"

namespace confhedge {

using ComparatorSequence = std::vector<WeightDistribution>;

std::size_t switch_count(const ComparatorSequence& q, double tol = kSimplexTol);

/// R_T^(q) = sum_t sum_i q p (base_t - l), where base_t is h_t for
/// ConfHedge-1 and a_t for ConfHedge-2.
double confidence_regret(std::span<const double> base, const std::vector<Vec>& losses,
                         const std::vector<Vec>& confidences, const ComparatorSequence& q);

/// The L_T^(q-) / L_T^(q+) envelopes of the comparator loss.
std::pair<double, double> comparator_envelopes(const std::vector<Vec>& losses,
                                               const std::vector<Vec>& confidences,
                                               const ComparatorSequence& q);

/// gamma_{k,T}: (k+2)(ln T + 1) for FixedShare, (2k+3) ln T + (k+2) for
/// UniformPast. No published coefficient exists for scheme None.
double gamma_coefficient(std::size_t k, std::size_t T, MixingVariant scheme);

/// Streaming accumulator for everything the bounds consume. Feed one
/// RoundRecord per round, optionally with a comparator vector.
class RegretLedger {
 public:
  explicit RegretLedger(std::size_t n_experts);

  void add_round(const RoundRecord& rec, std::span<const double> losses,
                 std::span<const double> confidences,
                 const WeightDistribution* comparator = nullptr);

  std::size_t rounds() const { return rounds_; }
  std::size_t n_experts() const { return n_; }
  double cum_hedge_loss() const { return cum_h_; }       // H_T
  double cum_forecast_loss() const { return cum_a_; }    // A_T
  double cum_mixloss() const { return cum_h_ - cum_gap_; }  // M_T = H_T - Delta_T
  double cum_min() const { return cum_min_; }            // L_T^-
  double cum_max() const { return cum_max_; }            // L_T^+
  double max_range() const { return max_range_; }        // S_T
  double sum_sq_range() const { return sum_sq_range_; }  // sum s_t^2
  double cum_gap() const { return cum_gap_; }            // Delta_T
  double cum_variance() const { return cum_var_; }       // V_T
  double comparator_lower() const { return q_lower_; }   // L_T^(q-)
  double comparator_upper() const { return q_upper_; }   // L_T^(q+)
  double comparator_effective() const { return q_eff_; } // L_T^(q), from effective losses
  double regret() const { return regret_; }              // R_T^(q)
  std::size_t switches() const { return switches_; }     // k
  double best_expert_loss() const;                       // L_T^*

 private:
  std::size_t n_;
  std::size_t rounds_ = 0;
  double cum_h_ = 0.0, cum_a_ = 0.0;
  double cum_min_ = 0.0, cum_max_ = 0.0;
  double max_range_ = 0.0, sum_sq_range_ = 0.0;
  double cum_gap_ = 0.0, cum_var_ = 0.0;
  double q_lower_ = 0.0, q_upper_ = 0.0, q_eff_ = 0.0;
  double regret_ = 0.0;
  std::size_t switches_ = 0;
  bool have_prev_q_ = false;
  Vec prev_q_;
  Vec per_expert_cum_;
};

/// Numeric right-hand sides of the published regret bounds.
struct BoundReport {
  double eq7 = 0.0;
  double eq8 = 0.0;
  double eq9 = 0.0;
  double eq10 = 0.0;
  double eq11 = 0.0;
  double eq2 = 0.0;  // AdaHedge bound, plain-regret baseline
};

BoundReport bound_values(const RegretLedger& ledger, std::size_t n_experts,
                         MixingVariant scheme);

std::map<std::string, double> bound_values_map(const RegretLedger& ledger,
                                               std::size_t n_experts, MixingVariant scheme);

/// g(x) = (e^x - x - 1)/x from the Bernstein step; +inf on overflow.
double bernstein_g(double x);

/// phi(x) = (e^x - x^2/2 - x - 1)/(x e^x - x^2 - x), bounded by 1/3.
double phi_ratio(double x);

}  // namespace confhedge
