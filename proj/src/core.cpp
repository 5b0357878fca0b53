#include "confhedge/core.hpp"

#include <algorithm>
#include <numeric>

namespace confhedge {

WeightDistribution::WeightDistribution(Vec weights) : w_(std::move(weights)) {
  if (w_.empty()) throw std::invalid_argument("WeightDistribution: empty vector");
  double sum = 0.0;
  for (double v : w_) {
    if (!(v >= 0.0)) throw std::invalid_argument("WeightDistribution: negative or NaN component");
    sum += v;
  }
  if (sum <= 0.0) throw std::invalid_argument("WeightDistribution: zero mass");
  // sums far from 1 are caller bugs, not accumulated drift
  if (std::abs(sum - 1.0) > 1e-6)
    throw std::invalid_argument("WeightDistribution: components sum to " + std::to_string(sum));
  for (double& v : w_) v /= sum;
}

WeightDistribution WeightDistribution::uniform(std::size_t n) {
  if (n == 0) throw std::invalid_argument("uniform: n must be positive");
  return WeightDistribution(Vec(n, 1.0 / static_cast<double>(n)));
}

bool WeightDistribution::approx_equal(const WeightDistribution& other, double tol) const {
  if (size() != other.size()) return false;
  for (std::size_t i = 0; i < size(); ++i)
    if (std::abs(w_[i] - other.w_[i]) > tol) return false;
  return true;
}

void RoundInput::validate() const {
  if (losses.empty() || losses.size() != confidences.size())
    throw std::invalid_argument("RoundInput: dimension mismatch");
  double mass = 0.0;
  for (double p : confidences) {
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("RoundInput: confidence outside [0,1]");
    mass += p;
  }
  if (!(mass > 0.0)) throw std::invalid_argument("RoundInput: zero confidence mass");
  for (double l : losses)
    if (!std::isfinite(l)) throw std::invalid_argument("RoundInput: non-finite loss");
}

double ln_star(std::size_t n) {
  if (n == 0) throw std::invalid_argument("ln_star: expert count must be positive");
  return std::max(1.0, std::log(static_cast<double>(n)));
}

double relative_entropy(const WeightDistribution& p, const WeightDistribution& q) {
  if (p.size() != q.size()) throw std::invalid_argument("relative_entropy: dimension mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;  // 0 ln 0 = 0
    if (q[i] == 0.0)
      throw std::domain_error("relative_entropy: infinite divergence (q_i = 0, p_i > 0)");
    d += p[i] * std::log(p[i] / q[i]);
  }
  return std::max(0.0, d);
}

namespace {

double support_min(const WeightDistribution& w, std::span<const double> x) {
  double m = kInfinity;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] > 0.0) m = std::min(m, x[i]);
  return m;
}

}  // namespace

WeightDistribution stable_exp_weights(const WeightDistribution& weights,
                                      std::span<const double> exponents, double eta) {
  const std::size_t n = weights.size();
  if (exponents.size() != n) throw std::invalid_argument("stable_exp_weights: dimension mismatch");
  if (!(eta > 0.0)) throw std::invalid_argument("stable_exp_weights: eta must be positive");

  Vec out(n, 0.0);
  const double xmin = support_min(weights, exponents);
  if (std::isinf(eta)) {
    for (std::size_t i = 0; i < n; ++i)
      if (weights[i] > 0.0 && exponents[i] == xmin) out[i] = weights[i];
  } else {
    for (std::size_t i = 0; i < n; ++i)
      if (weights[i] > 0.0) out[i] = weights[i] * std::exp(-eta * (exponents[i] - xmin));
  }
  double sum = std::accumulate(out.begin(), out.end(), 0.0);
  if (!(sum > 0.0)) throw std::domain_error("stable_exp_weights: degenerate distribution");
  for (double& v : out) v /= sum;
  return WeightDistribution(std::move(out));
}

double mixloss(const WeightDistribution& weights, std::span<const double> values, double eta) {
  const std::size_t n = weights.size();
  if (values.size() != n) throw std::invalid_argument("mixloss: dimension mismatch");
  const double xmin = support_min(weights, values);
  if (std::isinf(eta)) return xmin;
  double z = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (weights[i] > 0.0) z += weights[i] * std::exp(-eta * (values[i] - xmin));
  return xmin - std::log(z) / eta;
}

double weighted_variance(const WeightDistribution& weights, std::span<const double> values) {
  if (values.size() != weights.size())
    throw std::invalid_argument("weighted_variance: dimension mismatch");
  const double mean = dot(weights, values);
  double v = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double d = values[i] - mean;
    v += weights[i] * d * d;
  }
  return v;
}

double dot(const WeightDistribution& weights, std::span<const double> values) {
  if (values.size() != weights.size()) throw std::invalid_argument("dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) s += weights[i] * values[i];
  return s;
}

}  // namespace confhedge
