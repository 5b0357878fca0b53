#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "confhedge/core.hpp"
#include "confhedge/rng.hpp"

using namespace confhedge;

namespace {

// brute-force log-sum-exp oracle in long double, no shifting
long double mixloss_oracle(const Vec& w, const Vec& x, long double eta) {
  long double z = 0.0L;
  for (std::size_t i = 0; i < w.size(); ++i)
    z += static_cast<long double>(w[i]) * std::exp(-eta * static_cast<long double>(x[i]));
  return -std::log(z) / eta;
}

WeightDistribution random_simplex(Rng& rng, std::size_t n) {
  Vec w(n);
  double sum = 0.0;
  for (double& v : w) {
    v = -std::log(1.0 - rng.uniform());
    sum += v;
  }
  for (double& v : w) v /= sum;
  return WeightDistribution(std::move(w));
}

}  // namespace

TEST_CASE("ln_star clamps below e") {
  CHECK(ln_star(1) == 1.0);
  CHECK(ln_star(2) == 1.0);
  CHECK(ln_star(10) == doctest::Approx(std::log(10.0)).epsilon(1e-14));
  CHECK_THROWS_AS(ln_star(0), std::invalid_argument);
}

TEST_CASE("relative entropy") {
  const WeightDistribution half({0.5, 0.5});
  CHECK(relative_entropy(half, half) == 0.0);
  CHECK(relative_entropy(WeightDistribution({1.0, 0.0}), half) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-14));
  // direct summation oracle: 0.5 ln(0.5/0.25) + 0.5 ln(0.5/0.75)
  const long double expect =
      0.5L * std::log(0.5L / 0.25L) + 0.5L * std::log(0.5L / 0.75L);
  CHECK(relative_entropy(half, WeightDistribution({0.25, 0.75})) ==
        doctest::Approx(static_cast<double>(expect)).epsilon(1e-14));
  CHECK(static_cast<double>(expect) == doctest::Approx(0.143841).epsilon(1e-5));
  CHECK_THROWS_AS(relative_entropy(WeightDistribution({1.0, 0.0}),
                                   WeightDistribution({0.0, 1.0})),
                  std::domain_error);
}

TEST_CASE("stable_exp_weights examples") {
  const WeightDistribution half({0.5, 0.5});
  SUBCASE("infinite eta concentrates on argmin") {
    const auto w = stable_exp_weights(half, Vec{0.0, 1.0}, kInfinity);
    CHECK(w[0] == 1.0);
    CHECK(w[1] == 0.0);
  }
  SUBCASE("equal exponents preserve weights") {
    for (double c : {-5.0, 0.0, 3e7}) {
      const auto w = stable_exp_weights(half, Vec{c, c}, 2.5);
      CHECK(w[0] == doctest::Approx(0.5).epsilon(1e-14));
    }
  }
  SUBCASE("finite eta sigmoid") {
    // oracle: e^{0.5} / (e^{0.5} + e^{-0.5})
    const long double expect = std::exp(0.5L) / (std::exp(0.5L) + std::exp(-0.5L));
    const auto w = stable_exp_weights(half, Vec{0.0, 1.0}, 1.0);
    CHECK(w[0] == doctest::Approx(static_cast<double>(expect)).epsilon(1e-14));
    CHECK(w[0] == doctest::Approx(0.731059).epsilon(1e-5));
  }
  SUBCASE("argmin ties split proportionally to prior") {
    const auto w = stable_exp_weights(WeightDistribution({0.2, 0.2, 0.6}),
                                      Vec{0.0, 0.0, 1.0}, kInfinity);
    CHECK(w[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(w[1] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(w[2] == 0.0);
  }
  SUBCASE("argmin outside support ignored") {
    const auto w =
        stable_exp_weights(WeightDistribution({0.0, 1.0}), Vec{-100.0, 5.0}, kInfinity);
    CHECK(w[1] == 1.0);
  }
}

TEST_CASE("mixloss examples") {
  const WeightDistribution half({0.5, 0.5});
  CHECK(mixloss(half, Vec{1.0, 2.0}, kInfinity) == 1.0);
  CHECK(mixloss(half, Vec{0.0, 0.0}, 1.0) == 0.0);
  const long double expect = mixloss_oracle({0.5, 0.5}, {0.0, 1.0}, 1.0L);
  CHECK(mixloss(half, Vec{0.0, 1.0}, 1.0) ==
        doctest::Approx(static_cast<double>(expect)).epsilon(1e-14));
  CHECK(static_cast<double>(expect) == doctest::Approx(0.379885).epsilon(1e-5));
}

TEST_CASE("weighted variance examples") {
  CHECK(weighted_variance(WeightDistribution({0.5, 0.5}), Vec{0.0, 1.0}) ==
        doctest::Approx(0.25).epsilon(1e-14));
  CHECK(weighted_variance(WeightDistribution({1.0, 0.0}), Vec{3.0, 100.0}) == 0.0);
  CHECK(weighted_variance(WeightDistribution({0.25, 0.75}), Vec{2.0, 4.0}) ==
        doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("shift invariance and equivariance properties") {
  Rng rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(6);
    const auto w = random_simplex(rng, n);
    Vec x(n);
    for (double& v : x) v = rng.uniform(-100.0, 100.0);
    const double c = rng.uniform(-1e3, 1e3);
    const double eta = std::exp(rng.uniform(-3.0, 3.0));

    Vec xc = x;
    for (double& v : xc) v += c;
    const auto a = stable_exp_weights(w, x, eta);
    const auto b = stable_exp_weights(w, xc, eta);
    // exact in real arithmetic; rounding of x + c limits attainable precision
    for (std::size_t i = 0; i < n; ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-9));

    CHECK(mixloss(w, xc, eta) == doctest::Approx(mixloss(w, x, eta) + c).epsilon(1e-10));

    // mixloss <= dot(w, x)
    CHECK(mixloss(w, x, eta) <= dot(w, x) + 1e-10 * std::max(1.0, std::abs(dot(w, x))));
  }
}

TEST_CASE("mixloss monotone in eta with the stated limits") {
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.uniform_index(5);
    const auto w = random_simplex(rng, n);
    Vec x(n);
    for (double& v : x) v = rng.uniform(-5.0, 5.0);
    const double lo = mixloss(w, x, 1e6);
    const double mid = mixloss(w, x, 1.0);
    const double hi = mixloss(w, x, 1e-6);
    CHECK(lo <= mid + 1e-9);
    CHECK(mid <= hi + 1e-9);
    CHECK(hi == doctest::Approx(dot(w, x)).epsilon(1e-5));
    double smin = kInfinity;
    for (std::size_t i = 0; i < n; ++i)
      if (w[i] > 0.0) smin = std::min(smin, x[i]);
    CHECK(lo == doctest::Approx(smin).epsilon(1e-4));
  }
}

TEST_CASE("mixloss equality iff constant on support") {
  const WeightDistribution w({0.5, 0.5, 0.0});
  CHECK(mixloss(w, Vec{2.0, 2.0, 99.0}, 3.0) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("Lemma 1 entropy inequalities") {
  Rng rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng.uniform_index(5);
    const auto w = random_simplex(rng, n);

    // item 2: q >= r w componentwise implies D(w||q) <= ln(1/r)
    const auto q = random_simplex(rng, n);
    double r = kInfinity;
    for (std::size_t i = 0; i < n; ++i) r = std::min(r, q[i] / std::max(w[i], 1e-300));
    if (r > 0.0 && std::isfinite(r))
      CHECK(relative_entropy(w, q) <= std::log(1.0 / r) + 1e-9);

    // item 3: for a positive mixture q = sum beta_i w_i, D(w_i||q) <= ln(1/beta_i)
    const std::size_t parts = 2 + rng.uniform_index(3);
    std::vector<WeightDistribution> comps;
    for (std::size_t i = 0; i < parts; ++i) comps.push_back(random_simplex(rng, n));
    const auto beta = random_simplex(rng, parts);
    Vec mix(n, 0.0);
    for (std::size_t i = 0; i < parts; ++i)
      for (std::size_t j = 0; j < n; ++j) mix[j] += beta[i] * comps[i][j];
    const WeightDistribution qmix(std::move(mix));
    for (std::size_t i = 0; i < parts; ++i)
      CHECK(relative_entropy(comps[i], qmix) <= std::log(1.0 / beta[i]) + 1e-9);

    CHECK(relative_entropy(w, q) >= 0.0);
  }
}

TEST_CASE("validation errors") {
  CHECK_THROWS_AS(WeightDistribution(Vec{0.5, -0.5}), std::invalid_argument);
  CHECK_THROWS_AS(WeightDistribution(Vec{0.2, 0.2}), std::invalid_argument);
  CHECK_THROWS_AS(stable_exp_weights(WeightDistribution({0.5, 0.5}), Vec{0.0}, 1.0),
                  std::invalid_argument);
  RoundInput bad{{1.0, 2.0}, {0.0, 0.0}};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  RoundInput outside{{1.0}, {1.5}};
  CHECK_THROWS_AS(outside.validate(), std::invalid_argument);
}
