#include <doctest.h>

#include <cmath>
#include <sstream>

#include "specmux/spectral.hpp"
#include "specmux/units.hpp"

using namespace specmux;
using namespace specmux::spectral;

namespace {
const ModeGrid kGrid = default_mode_grid();
}

TEST_CASE("channel transmission is a unit-peak Gaussian with the right FWHM") {
  const SpectralMode fi2 = kGrid.idler_channel(1);
  CHECK(fi2.center_thz == doctest::Approx(193.5117));
  CHECK(filter_transmission(fi2, 193.5117) == doctest::Approx(1.0));
  CHECK(filter_transmission(fi2, fi2.center_thz + 0.5 * 6.5 / kGhzPerThz) ==
        doctest::Approx(0.5));
  // Hand-evaluated Gaussian one channel spacing away.
  const double expected = std::exp(-4.0 * M_LN2 * std::pow(12.5 / 6.5, 2));
  CHECK(filter_transmission(fi2, fi2.center_thz + 12.5 / kGhzPerThz) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("mode grid pairings close on the energy-conservation sum") {
  for (std::size_t m = 0; m < 3; ++m)
    CHECK(kGrid.signal_centers_thz[m] + kGrid.idler_centers_thz[m] ==
          doctest::Approx(389.1998).epsilon(1e-12));
  CHECK(kGrid.idler_centers_thz[1] - kGrid.idler_centers_thz[0] ==
        doctest::Approx(12.5 / kGhzPerThz));
}

TEST_CASE("filter bank validation rejects bad inputs") {
  FilterBank bank = make_heralding_bank(kGrid, {4.58, 4.58, 4.60});
  CHECK_NOTHROW(bank.validate());

  FilterBank unsorted = bank;
  std::swap(unsorted.channels[0], unsorted.channels[2]);
  CHECK_THROWS_AS(unsorted.validate(), std::invalid_argument);

  FilterBank negative = bank;
  negative.insertion_loss_db[1] = -0.1;
  CHECK_THROWS_AS(negative.validate(), std::invalid_argument);
}

TEST_CASE("jsi_value peaks on the ridge and falls off along the anti-diagonal") {
  const double f_s0 = kGrid.signal_centers_thz[1];
  const double f_i2 = kGrid.idler_centers_thz[1];
  const double peak = jsi_value(f_s0, f_i2, 6.4, kGrid.pair_sum_thz);
  CHECK(peak == doctest::Approx(1.0));

  // Offsetting both axes by half the pump bandwidth halves the intensity.
  const double offset = 3.2 / kGhzPerThz;
  CHECK(jsi_value(f_s0 + offset, f_i2 + offset, 6.4, kGrid.pair_sum_thz) ==
        doctest::Approx(0.5).epsilon(1e-12));

  CHECK_THROWS_AS(jsi_value(f_s0, f_i2, 0.0, kGrid.pair_sum_thz),
                  std::invalid_argument);
}

TEST_CASE("jsi_value with the heralding bank reflects the f_i1 excess loss") {
  JsiFilters filters;
  filters.idler = make_heralding_bank(kGrid, {5.58, 4.58, 4.60});
  const double island_1 =
      jsi_value(kGrid.signal_centers_thz[0], kGrid.idler_centers_thz[0], 6.4,
                kGrid.pair_sum_thz, filters);
  const double island_2 =
      jsi_value(kGrid.signal_centers_thz[1], kGrid.idler_centers_thz[1], 6.4,
                kGrid.pair_sum_thz, filters);
  CHECK(island_1 / island_2 == doctest::Approx(std::pow(10.0, -0.1)).epsilon(1e-4));
}

namespace {
JsiSweepConfig sweep_config() {
  JsiSweepConfig config;
  config.grid = kGrid;
  config.heralding_loss_db = {5.58, 4.58, 4.60};
  return config;
}
}  // namespace

TEST_CASE("unfiltered sweep: 21x21 grid, nonnegative, ridge-symmetric") {
  const JsiGrid grid = jsi_sweep(sweep_config(), JsiScenario::unfiltered);
  REQUIRE(grid.signal_axis_thz.size() == 21);
  REQUIRE(grid.idler_axis_thz.size() == 21);
  double total = 0.0;
  for (double v : grid.intensity) {
    CHECK(v >= 0.0);
    total += v;
  }
  CHECK(std::isfinite(total));

  // Reflection about the energy-conservation ridge maps the grid onto
  // itself: (f_s, f_i) -> (sum - f_i, sum - f_s) reverses both axes.
  for (std::size_t i = 0; i < 21; ++i)
    for (std::size_t s = 0; s < 21; ++s)
      CHECK(grid.at(i, s) == doctest::Approx(grid.at(20 - s, 20 - i)).epsilon(1e-9));
}

TEST_CASE("unfiltered sweep anti-diagonal FWHM matches the pump bandwidth") {
  const JsiGrid grid = jsi_sweep(sweep_config(), JsiScenario::unfiltered);
  const double fwhm = antidiagonal_fwhm_ghz(grid, kGrid.pair_sum_thz);
  CHECK(fwhm == doctest::Approx(6.4).epsilon(0.02));
}

TEST_CASE("heralding-bank sweep breaks the ridge into three islands") {
  const JsiGrid grid = jsi_sweep(sweep_config(), JsiScenario::heralding_bank);
  const auto maxima = local_maxima(grid);
  REQUIRE(maxima.size() == 3);
  // Islands sit at (f_s+, f_i1), (f_s0, f_i2), (f_s-, f_i3).
  for (std::size_t m = 0; m < 3; ++m) {
    const auto [i, s] = maxima[m];
    CHECK(grid.idler_axis_thz[i] ==
          doctest::Approx(kGrid.idler_centers_thz[m]).epsilon(1e-9));
    CHECK(grid.signal_axis_thz[s] ==
          doctest::Approx(kGrid.signal_centers_thz[m]).epsilon(1e-9));
  }
  // Three signal-marginal peaks.
  const auto marginal = grid.signal_marginal();
  int peaks = 0;
  for (std::size_t k = 1; k + 1 < marginal.size(); ++k)
    if (marginal[k] > marginal[k - 1] && marginal[k] > marginal[k + 1]) ++peaks;
  CHECK(peaks == 3);
}

TEST_CASE("multiplexed sweep concentrates all islands on the central row") {
  const JsiGrid grid = jsi_sweep(sweep_config(), JsiScenario::multiplexed);
  const auto maxima = local_maxima(grid);
  REQUIRE(maxima.size() == 3);
  for (const auto& [i, s] : maxima)
    CHECK(grid.signal_axis_thz[s] ==
          doctest::Approx(kGrid.signal_centers_thz[1]).epsilon(1e-9));

  // Signal marginal is unimodal with its maximum at f_s0.
  const auto marginal = grid.signal_marginal();
  std::size_t peak = 0;
  for (std::size_t k = 1; k < marginal.size(); ++k)
    if (marginal[k] > marginal[peak]) peak = k;
  CHECK(grid.signal_axis_thz[peak] ==
        doctest::Approx(kGrid.signal_centers_thz[1]).epsilon(1e-9));
  for (std::size_t k = 0; k + 1 < marginal.size(); ++k) {
    if (k < peak)
      CHECK(marginal[k] <= marginal[k + 1] + 1e-15);
    else
      CHECK(marginal[k] >= marginal[k + 1] - 1e-15);
  }
}

TEST_CASE("unknown sweep scenario name is rejected") {
  CHECK_THROWS_AS(parse_jsi_scenario("diagonal"), std::invalid_argument);
  CHECK(parse_jsi_scenario("multiplexed") == JsiScenario::multiplexed);
}

TEST_CASE("grid CSV carries one header row and one row per idler value") {
  const JsiGrid grid = jsi_sweep(sweep_config(), JsiScenario::unfiltered);
  std::ostringstream csv;
  grid.write_csv(csv);
  std::istringstream lines(csv.str());
  std::string line;
  std::size_t rows = 0;
  std::size_t commas = 0;
  while (std::getline(lines, line)) {
    if (rows == 0)
      commas = static_cast<std::size_t>(std::count(line.begin(), line.end(), ','));
    ++rows;
  }
  CHECK(rows == 22);
  CHECK(commas == 21);
}
