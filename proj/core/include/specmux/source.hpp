#pragma once

#include <cstdint>
#include <vector>

#include "specmux/rng.hpp"

namespace specmux::source {

enum class PumpMode { cw_binned, pulsed };

/// Pump and gain description of the pair source. The gain coefficient is a
/// calibration knob (mean pairs per bin per mW^2 per mode); absolute rates
/// are anchored to it, not to a first-principles nonlinearity model.
struct SourceConfig {
  double pump_power_mw = 0.0;
  PumpMode pump_mode = PumpMode::cw_binned;
  /// cw_binned: time quantum of the simulation, defaulting to the photon
  /// coherence time of a 6.5 GHz channel.
  double bin_width_ns = 1.0 / 6.5;
  /// pulsed: one bin per pulse.
  double rep_rate_mhz = 500.0;
  double pulse_fwhm_ps = 65.0;
  double peak_power_mw = 25.0;
  double gain_coefficient = 1e-4;
  /// Pump-power exponent of the pair rate; 2 for a cascaded chi-2 source
  /// (second-harmonic power quadratic in pump).
  double power_exponent = 2.0;
  int mode_count = 3;

  void validate() const;
  double bins_per_second() const;
  /// Power entering the quadratic law: CW power, or peak power when pulsed.
  double effective_power_mw() const;
};

/// Pairs generated in one time bin, one entry per spectral mode.
struct PairBatch {
  std::uint64_t bin_index = 0;
  std::vector<std::uint32_t> pairs_per_mode;
};

/// Mean pair number per bin for one spectral mode:
/// mu = gain * P^exponent, identical across modes before channel losses.
double mean_pairs_per_bin(const SourceConfig& config, int mode_index);

/// One draw from the single-mode thermal (Bose-Einstein) distribution
/// p(n) = mu^n / (1 + mu)^(n+1).
std::uint32_t sample_pair_numbers(Rng& rng, double mu);

struct PhotonNumberDistribution {
  std::vector<double> probabilities;  // p(0) .. p(n_max)
  double tail = 0.0;                  // mass beyond n_max
};

/// Thermal probabilities up to n_max with the truncated tail reported
/// separately; probabilities + tail sum to 1.
PhotonNumberDistribution photon_number_distribution(double mu, int n_max);

/// Convenience for tests: sample `bins` consecutive batches.
std::vector<PairBatch> sample_batches(const SourceConfig& config, Rng& rng,
                                      std::uint64_t bins);

}  // namespace specmux::source
