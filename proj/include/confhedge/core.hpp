#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace confhedge {

using Vec = std::vector<double>;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
inline constexpr double kSimplexTol = 1e-12;

/// A point on the N-simplex. Renormalized on construction; rejects
/// negative components and vectors whose sum is off by more than the
/// simplex tolerance.
class WeightDistribution {
 public:
  explicit WeightDistribution(Vec weights);
  static WeightDistribution uniform(std::size_t n);

  std::size_t size() const { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }
  const Vec& weights() const { return w_; }

  bool approx_equal(const WeightDistribution& other, double tol = kSimplexTol) const;

 private:
  Vec w_;
};

/// One round of the loss-allocation game: signed unbounded losses plus
/// confidence levels in [0,1] with positive total mass.
struct RoundInput {
  Vec losses;
  Vec confidences;

  std::size_t size() const { return losses.size(); }
  void validate() const;
};

/// Per-round diagnostics emitted by both learners.
struct RoundRecord {
  double hedge_loss = 0.0;                    // h_t
  std::optional<double> forecast_loss;        // a_t (forecasting mode only)
  double mixloss = 0.0;                       // m_t
  double gap = 0.0;                           // delta_t = h_t - m_t
  double learning_rate_used = kInfinity;      // eta_t
  double loss_min = 0.0;                      // l_t^-
  double loss_max = 0.0;                      // l_t^+
  double loss_range = 0.0;                    // s_t
  double weight_variance = 0.0;               // v_t over effective losses
  WeightDistribution prediction;              // w_t^*

  RoundRecord() : prediction(WeightDistribution::uniform(1)) {}
};

double ln_star(std::size_t n);

double relative_entropy(const WeightDistribution& p, const WeightDistribution& q);

/// Normalized w_i * exp(-eta * x_i), min-shifted before exponentiation.
/// eta = +inf takes the analytic limit: mass on the argmin of x within
/// the support of w, proportional to w there.
WeightDistribution stable_exp_weights(const WeightDistribution& weights,
                                      std::span<const double> exponents, double eta);

/// -(1/eta) ln sum_i w_i exp(-eta x_i) via min-shifted log-sum-exp;
/// eta = +inf gives min over the support of w.
double mixloss(const WeightDistribution& weights, std::span<const double> values,
               double eta);

double weighted_variance(const WeightDistribution& weights,
                         std::span<const double> values);

double dot(const WeightDistribution& weights, std::span<const double> values);

}  // namespace confhedge
