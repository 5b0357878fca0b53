#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "confhedge/mixing.hpp"
#include "confhedge/rng.hpp"

using namespace confhedge;

namespace {

WeightDistribution random_simplex(Rng& rng, std::size_t n) {
  Vec w(n);
  double sum = 0.0;
  for (double& v : w) {
    v = rng.uniform() + 1e-6;
    sum += v;
  }
  for (double& v : w) v /= sum;
  return WeightDistribution(std::move(w));
}

}  // namespace

TEST_CASE("alpha schedules") {
  CHECK(alpha_at(AlphaSchedule::inverse_t(), 2) == 0.5);
  CHECK(alpha_at(AlphaSchedule::inverse_t(), 10) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(alpha_at(AlphaSchedule::constant(0.05), 7) == 0.05);
  CHECK_THROWS_AS(alpha_at(AlphaSchedule::inverse_t(), 1), std::invalid_argument);
  CHECK_THROWS_AS(AlphaSchedule::constant(0.0), std::invalid_argument);
  CHECK_THROWS_AS(AlphaSchedule::constant(1.5), std::invalid_argument);
}

TEST_CASE("fixed share examples") {
  const auto a = fixed_share_mix(WeightDistribution({1.0, 0.0}), 0.5);
  CHECK(a[0] == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(a[1] == doctest::Approx(0.25).epsilon(1e-15));

  const auto reset = fixed_share_mix(WeightDistribution({0.9, 0.05, 0.05}), 1.0);
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(reset[i] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  const auto c = fixed_share_mix(WeightDistribution({0.2, 0.3, 0.5}), 0.1);
  CHECK(c[0] == doctest::Approx(0.1 / 3.0 + 0.9 * 0.2).epsilon(1e-14));
  CHECK(c[1] == doctest::Approx(0.1 / 3.0 + 0.9 * 0.3).epsilon(1e-14));
  CHECK(c[2] == doctest::Approx(0.1 / 3.0 + 0.9 * 0.5).epsilon(1e-14));
}

TEST_CASE("uniform past examples") {
  SUBCASE("single past vector, midpoint") {
    const MixingMemory mem{WeightDistribution({0.5, 0.5}), 1};
    const auto [out, next] = uniform_past_mix(WeightDistribution({0.9, 0.1}), mem, 0.5);
    CHECK(out[0] == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(next.count == 2);
    CHECK(next.past_mean[0] == doctest::Approx(0.7).epsilon(1e-15));
  }
  SUBCASE("alpha -> 0 keeps w_mu") {
    const MixingMemory mem{WeightDistribution({0.5, 0.5}), 1};
    const auto [out, next] = uniform_past_mix(WeightDistribution({0.9, 0.1}), mem, 1e-15);
    CHECK(out[0] == doctest::Approx(0.9).epsilon(1e-12));
  }
  SUBCASE("explicit beta mixture oracle") {
    // past = {(0.5,0.5), (0.9,0.1)}, w_mu = (0.8,0.2), alpha = 1/3
    // equals sum beta_s w_s^mu with beta = (1/6, 1/6, 2/3)
    MixingMemory mem{WeightDistribution({0.5, 0.5}), 1};
    mem = uniform_past_mix(WeightDistribution({0.9, 0.1}), mem, 0.5).second;
    const auto [out, next] =
        uniform_past_mix(WeightDistribution({0.8, 0.2}), mem, 1.0 / 3.0);
    const double oracle0 = (0.5 + 0.9) / 6.0 + (2.0 / 3.0) * 0.8;
    CHECK(out[0] == doctest::Approx(oracle0).epsilon(1e-14));
    CHECK(out[0] == doctest::Approx(0.766666).epsilon(1e-5));
    CHECK(out[1] == doctest::Approx(0.233333).epsilon(1e-5));
  }
}

TEST_CASE("running average equals the explicit O(t) mixture") {
  Rng rng(2024);
  const std::size_t n = 4;
  MixingMemory mem = MixingMemory::initial(n);
  std::vector<WeightDistribution> history{WeightDistribution::uniform(n)};  // w_0^mu
  for (std::size_t t = 1; t <= 1000; ++t) {
    const auto w_mu = random_simplex(rng, n);
    const double alpha = alpha_at(AlphaSchedule::inverse_t(), t + 1);
    const auto [out, next] = uniform_past_mix(w_mu, mem, alpha);

    Vec explicit_mix(n, 0.0);
    const double per = alpha / static_cast<double>(history.size());
    for (const auto& past : history)
      for (std::size_t i = 0; i < n; ++i) explicit_mix[i] += per * past[i];
    for (std::size_t i = 0; i < n; ++i) explicit_mix[i] += (1.0 - alpha) * w_mu[i];

    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(out[i] == doctest::Approx(explicit_mix[i]).epsilon(1e-12));
      sum += out[i];
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));

    history.push_back(w_mu);
    mem = next;
  }
}

TEST_CASE("fixed share floor and simplex preservation") {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(8);
    const auto w = random_simplex(rng, n);
    const double alpha = rng.uniform() * 0.999 + 0.001;
    const auto mixed = fixed_share_mix(w, alpha);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(mixed[i] >= alpha / static_cast<double>(n) - 1e-15);
      sum += mixed[i];
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("scheme None is the identity") {
  MixingMemory mem = MixingMemory::initial(3);
  const WeightDistribution w({0.2, 0.3, 0.5});
  const MixingScheme none{MixingVariant::None, AlphaSchedule::inverse_t()};
  const auto out = apply_mixing(none, w, mem, 5);
  CHECK(out.approx_equal(w, 0.0));
}
