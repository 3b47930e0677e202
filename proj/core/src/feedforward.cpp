#include "specmux/feedforward.hpp"

#include <cmath>
#include <stdexcept>

#include "specmux/units.hpp"

namespace specmux::feedforward {

void FeedForwardConfig::validate() const {
  if (v_pi_volts <= 0.0)
    throw std::invalid_argument("feedforward: v_pi must be > 0");
  if (shift_efficiency < 0.0 || shift_efficiency > 1.0)
    throw std::invalid_argument("feedforward: shift efficiency must be in [0,1]");
  if (awg_f3db_mhz <= 0.0)
    throw std::invalid_argument("feedforward: AWG 3 dB bandwidth must be > 0");
  if (butterworth_order < 1)
    throw std::invalid_argument("feedforward: Butterworth order must be >= 1");
}

double frequency_shift_magnitude(double kappa_vps, double v_pi_volts) {
  if (v_pi_volts <= 0.0)
    throw std::invalid_argument("feedforward: v_pi must be > 0");
  const double shift_hz = kappa_vps / (2.0 * v_pi_volts);
  return shift_hz / kHzPerGhz;
}

double trigger_survival_probability(double heralding_rate_khz,
                                    const FeedForwardConfig& config) {
  config.validate();
  if (heralding_rate_khz < 0.0)
    throw std::invalid_argument("feedforward: heralding rate must be >= 0");
  if (!config.survival_enabled) return 1.0;
  const double x = heralding_rate_khz * 1e3 / (config.awg_f3db_mhz * kHzPerMhz);
  return 1.0 / std::sqrt(1.0 + std::pow(x, 2.0 * config.butterworth_order));
}

std::vector<ShiftOutcome> apply_feedforward(
    const std::vector<HeraldClicks>& heralds,
    std::vector<SignalPhoton>& photons, const spectral::ModeGrid& grid,
    const FeedForwardConfig& config, double side_mode_rate_khz, Rng& rng) {
  config.validate();
  const double survival =
      trigger_survival_probability(side_mode_rate_khz, config);
  const double spacing_thz = grid.channel_spacing_ghz / kGhzPerThz;

  std::vector<ShiftOutcome> outcomes;
  outcomes.reserve(photons.size());
  std::size_t herald_cursor = 0;
  std::uint64_t ramp_bin = UINT64_MAX;
  bool down_ok = false, up_ok = false;
  for (auto& photon : photons) {
    while (herald_cursor < heralds.size() &&
           heralds[herald_cursor].bin_index < photon.bin_index)
      ++herald_cursor;
    if (herald_cursor >= heralds.size() ||
        heralds[herald_cursor].bin_index != photon.bin_index)
      throw std::invalid_argument("feedforward: herald/photon timelines do not match");
    const HeraldClicks& bin = heralds[herald_cursor];

    // One ramp decision per trigger per bin; the ramp acts on the whole bin,
    // so every photon sharing it sees the same net displacement.
    if (photon.bin_index != ramp_bin) {
      ramp_bin = photon.bin_index;
      const double p = config.shift_efficiency * survival;
      down_ok = bin.clicked[0] && rng.bernoulli(p);
      up_ok = bin.clicked[2] && rng.bernoulli(p);
    }

    // Outcome fields track the photon's own trigger; the frequency reflects
    // the bin's net displacement (both ramps firing at once cancel).
    ShiftOutcome outcome;
    outcome.attempted = (photon.mode == 0 && bin.clicked[0]) ||
                        (photon.mode == 2 && bin.clicked[2]);
    outcome.trigger_survived =
        (photon.mode == 0 && down_ok) || (photon.mode == 2 && up_ok);
    outcome.shift_applied = outcome.trigger_survived;
    const double shift_thz =
        (down_ok ? -spacing_thz : 0.0) + (up_ok ? spacing_thz : 0.0);
    photon.frequency_thz += shift_thz;
    outcome.resulting_frequency_thz = photon.frequency_thz;
    outcomes.push_back(outcome);
  }
  return outcomes;
}

}  // namespace specmux::feedforward
