#include <doctest.h>

#include <cmath>

#include "specmux/rng.hpp"
#include "specmux/source.hpp"

using namespace specmux;
using namespace specmux::source;

TEST_CASE("mean pair number follows the quadratic pump law") {
  SourceConfig config;
  config.gain_coefficient = 1e-4;
  config.pump_power_mw = 0.0;
  CHECK(mean_pairs_per_bin(config, 0) == 0.0);

  config.pump_power_mw = 4.0;
  CHECK(mean_pairs_per_bin(config, 0) == doctest::Approx(1.6e-3).epsilon(1e-12));

  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    config.pump_power_mw = 0.1 + 20.0 * rng.uniform();
    const double mu = mean_pairs_per_bin(config, 0);
    config.pump_power_mw *= 2.0;
    CHECK(mean_pairs_per_bin(config, 0) == doctest::Approx(4.0 * mu));
  }
  CHECK_THROWS_AS(mean_pairs_per_bin(config, 7), std::invalid_argument);
}

TEST_CASE("thermal sampler: zero mean, ground-state weight and sample mean") {
  Rng rng(123);
  for (int i = 0; i < 1000; ++i) CHECK(sample_pair_numbers(rng, 0.0) == 0);

  const std::uint64_t draws = 2'000'000;
  std::uint64_t zeros = 0;
  double sum = 0.0;
  for (std::uint64_t i = 0; i < draws; ++i) {
    const auto n = sample_pair_numbers(rng, 1.0);
    zeros += n == 0;
    sum += n;
  }
  // p(0) = 1/(1+mu) = 1/2; binomial error.
  const double p0 = static_cast<double>(zeros) / draws;
  CHECK(std::abs(p0 - 0.5) < 3.0 * std::sqrt(0.25 / draws));
  // Sample mean within 3 sigma of mu; thermal variance mu(1+mu) = 2.
  const double mean = sum / draws;
  CHECK(std::abs(mean - 1.0) < 3.0 * std::sqrt(2.0 / draws));
}

TEST_CASE("photon number distribution: closed-form values and normalization") {
  const auto zero = photon_number_distribution(0.0, 3);
  REQUIRE(zero.probabilities.size() == 4);
  CHECK(zero.probabilities[0] == 1.0);
  CHECK(zero.probabilities[1] == 0.0);
  CHECK(zero.tail == 0.0);

  const auto one = photon_number_distribution(1.0, 2);
  CHECK(one.probabilities[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(one.probabilities[1] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(one.probabilities[2] == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(one.tail == doctest::Approx(0.125).epsilon(1e-12));

  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const double mu = 5.0 * rng.uniform();
    const int n_max = 1 + static_cast<int>(20 * rng.uniform());
    const auto dist = photon_number_distribution(mu, n_max);
    double total = dist.tail;
    for (double p : dist.probabilities) total += p;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(photon_number_distribution(-0.5, 3), std::invalid_argument);
}

TEST_CASE("unheralded thermal light has g2(0) = 2") {
  Rng rng(20210417);
  const std::uint64_t draws = 4'000'000;
  const double mu = 0.8;
  double sum = 0.0, pair_sum = 0.0;
  for (std::uint64_t i = 0; i < draws; ++i) {
    const double n = sample_pair_numbers(rng, mu);
    sum += n;
    pair_sum += n * (n - 1.0);
  }
  const double mean = sum / draws;
  const double g2 = (pair_sum / draws) / (mean * mean);
  CHECK(g2 == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("pair numbers are independent across modes and bins") {
  SourceConfig config;
  config.gain_coefficient = 1e-4;
  config.pump_power_mw = 60.0;  // mu = 0.36
  config.mode_count = 3;
  Rng rng(99);
  const auto batches = sample_batches(config, rng, 200'000);
  const double mu = mean_pairs_per_bin(config, 0);
  const double var = mu * (1.0 + mu);

  double cross_modes = 0.0, cross_bins = 0.0;
  for (std::size_t b = 0; b < batches.size(); ++b) {
    const auto& pairs = batches[b].pairs_per_mode;
    cross_modes += (pairs[0] - mu) * (pairs[1] - mu);
    if (b > 0)
      cross_bins +=
          (pairs[0] - mu) * (batches[b - 1].pairs_per_mode[0] - mu);
  }
  const double n = static_cast<double>(batches.size());
  const double standard_error = var / std::sqrt(n);
  CHECK(std::abs(cross_modes / n) < 3.0 * standard_error);
  CHECK(std::abs(cross_bins / n) < 3.0 * standard_error);
}

TEST_CASE("pulsed pump uses the repetition rate as the bin clock") {
  SourceConfig config;
  config.pump_mode = PumpMode::pulsed;
  config.rep_rate_mhz = 500.0;
  config.peak_power_mw = 25.0;
  config.gain_coefficient = 1e-5;
  CHECK(config.bins_per_second() == doctest::Approx(5e8));
  CHECK(mean_pairs_per_bin(config, 0) == doctest::Approx(1e-5 * 625.0));
}
