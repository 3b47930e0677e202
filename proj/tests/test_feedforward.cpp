#include <doctest.h>

#include <cmath>

#include "specmux/feedforward.hpp"
#include "specmux/spectral.hpp"
#include "specmux/units.hpp"

using namespace specmux;
using namespace specmux::feedforward;

TEST_CASE("ramp slope and pi-voltage set the shift magnitude") {
  CHECK(frequency_shift_magnitude(0.0, 1.4) == 0.0);
  // kappa = 2 Vpi df for a 12.5 GHz shift at Vpi = 1.4 V.
  CHECK(frequency_shift_magnitude(3.5e10, 1.4) == doctest::Approx(12.5));
  CHECK(frequency_shift_magnitude(-3.5e10, 1.4) == doctest::Approx(-12.5));
  // Quadrupling the slope quadruples the shift; a 4x faster AWG driving the
  // same modulator reaches ~100 GHz from a 25 GHz base.
  const double base = frequency_shift_magnitude(2.0 * 1.4 * 25e9, 1.4);
  CHECK(base == doctest::Approx(25.0));
  CHECK(frequency_shift_magnitude(4.0 * 2.0 * 1.4 * 25e9, 1.4) ==
        doctest::Approx(4.0 * base));
  CHECK_THROWS_AS(frequency_shift_magnitude(1e10, 0.0), std::invalid_argument);
}

TEST_CASE("trigger survival is the Butterworth magnitude response") {
  FeedForwardConfig config;
  CHECK(trigger_survival_probability(0.0, config) == 1.0);
  // 3 dB point of the AWG trigger chain.
  CHECK(trigger_survival_probability(1200.0, config) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));
  // Closed form one octave above for order 2.
  CHECK(trigger_survival_probability(2400.0, config) ==
        doctest::Approx(1.0 / std::sqrt(17.0)).epsilon(1e-9));

  config.survival_enabled = false;
  CHECK(trigger_survival_probability(5000.0, config) == 1.0);
  config.survival_enabled = true;

  Rng rng(3);
  double previous = 1.1;
  for (double rate = 0.0; rate < 1e4; rate += 37.0 + 100.0 * rng.uniform()) {
    const double p = trigger_survival_probability(rate, config);
    CHECK(p <= previous);
    CHECK(p >= 0.0);
    previous = p;
  }
  CHECK_THROWS_AS(trigger_survival_probability(-1.0, config),
                  std::invalid_argument);
}

namespace {

SignalPhoton photon_at(std::uint64_t bin, int mode,
                       const spectral::ModeGrid& grid) {
  return {bin, mode, grid.signal_centers_thz[static_cast<std::size_t>(mode)]};
}

}  // namespace

TEST_CASE("feed-forward moves side photons onto the central mode") {
  const spectral::ModeGrid grid = spectral::default_mode_grid();
  FeedForwardConfig config;
  config.shift_efficiency = 1.0;
  Rng rng(17);

  SUBCASE("central herald leaves the photon in place") {
    std::vector<HeraldClicks> heralds = {{0, {false, true, false}}};
    std::vector<SignalPhoton> photons = {photon_at(0, 1, grid)};
    const auto outcomes =
        apply_feedforward(heralds, photons, grid, config, 0.0, rng);
    REQUIRE(outcomes.size() == 1);
    CHECK_FALSE(outcomes[0].attempted);
    CHECK_FALSE(outcomes[0].shift_applied);
    CHECK(photons[0].frequency_thz ==
          doctest::Approx(grid.signal_centers_thz[1]));
  }

  SUBCASE("f_i1 herald down-shifts the f_s+ twin by one spacing") {
    std::vector<HeraldClicks> heralds = {{0, {true, false, false}}};
    std::vector<SignalPhoton> photons = {photon_at(0, 0, grid)};
    const auto outcomes =
        apply_feedforward(heralds, photons, grid, config, 0.0, rng);
    CHECK(outcomes[0].attempted);
    CHECK(outcomes[0].shift_applied);
    CHECK(photons[0].frequency_thz ==
          doctest::Approx(grid.signal_centers_thz[1]).epsilon(1e-12));
  }

  SUBCASE("a dead shifter leaves the photon at its original frequency") {
    config.shift_efficiency = 0.0;
    std::vector<HeraldClicks> heralds = {{0, {false, false, true}}};
    std::vector<SignalPhoton> photons = {photon_at(0, 2, grid)};
    const auto outcomes =
        apply_feedforward(heralds, photons, grid, config, 0.0, rng);
    CHECK(outcomes[0].attempted);
    CHECK_FALSE(outcomes[0].shift_applied);
    CHECK(photons[0].frequency_thz ==
          doctest::Approx(grid.signal_centers_thz[2]));
  }

  SUBCASE("the ramp is common mode within the bin") {
    std::vector<HeraldClicks> heralds = {{0, {true, false, false}}};
    std::vector<SignalPhoton> photons = {photon_at(0, 0, grid),
                                         photon_at(0, 1, grid)};
    apply_feedforward(heralds, photons, grid, config, 0.0, rng);
    // The targeted photon lands on f_s0 while the bystander central photon
    // is pushed one spacing down.
    CHECK(photons[0].frequency_thz ==
          doctest::Approx(grid.signal_centers_thz[1]).epsilon(1e-12));
    CHECK(photons[1].frequency_thz ==
          doctest::Approx(grid.signal_centers_thz[2]).epsilon(1e-12));
  }

  SUBCASE("mismatched timelines are rejected") {
    std::vector<HeraldClicks> heralds = {{5, {true, false, false}}};
    std::vector<SignalPhoton> photons = {photon_at(3, 0, grid)};
    CHECK_THROWS_AS(apply_feedforward(heralds, photons, grid, config, 0.0, rng),
                    std::invalid_argument);
  }
}

TEST_CASE("ideal settings deliver every heralded side photon at f_s0") {
  const spectral::ModeGrid grid = spectral::default_mode_grid();
  FeedForwardConfig config;
  config.shift_efficiency = 1.0;
  config.survival_enabled = false;
  Rng rng(29);

  std::vector<HeraldClicks> heralds;
  std::vector<SignalPhoton> photons;
  for (std::uint64_t bin = 0; bin < 2000; ++bin) {
    const int mode = static_cast<int>(bin % 3);
    HeraldClicks h{bin, {false, false, false}};
    h.clicked[mode] = true;
    heralds.push_back(h);
    photons.push_back(photon_at(bin, mode, grid));
  }
  const auto outcomes =
      apply_feedforward(heralds, photons, grid, config, 1e6, rng);
  for (std::size_t i = 0; i < photons.size(); ++i) {
    CHECK(photons[i].frequency_thz ==
          doctest::Approx(grid.signal_centers_thz[1]).epsilon(1e-12));
    // Invariant: an applied shift implies a surviving trigger on an attempt.
    if (outcomes[i].shift_applied) {
      CHECK(outcomes[i].attempted);
      CHECK(outcomes[i].trigger_survived);
    }
  }
}
