#include "specmux/source.hpp"

#include <cmath>
#include <stdexcept>

namespace specmux::source {

void SourceConfig::validate() const {
  if (pump_power_mw < 0.0)
    throw std::invalid_argument("source: pump power must be >= 0");
  if (gain_coefficient <= 0.0)
    throw std::invalid_argument("source: gain coefficient must be > 0");
  if (mode_count < 1)
    throw std::invalid_argument("source: mode count must be >= 1");
  if (pump_mode == PumpMode::cw_binned && bin_width_ns <= 0.0)
    throw std::invalid_argument("source: bin width must be > 0");
  if (pump_mode == PumpMode::pulsed && rep_rate_mhz <= 0.0)
    throw std::invalid_argument("source: repetition rate must be > 0");
}

double SourceConfig::bins_per_second() const {
  return pump_mode == PumpMode::cw_binned ? 1e9 / bin_width_ns
                                          : rep_rate_mhz * 1e6;
}

double SourceConfig::effective_power_mw() const {
  return pump_mode == PumpMode::cw_binned ? pump_power_mw : peak_power_mw;
}

double mean_pairs_per_bin(const SourceConfig& config, int mode_index) {
  if (mode_index < 0 || mode_index >= config.mode_count)
    throw std::invalid_argument("source: mode index out of range");
  return config.gain_coefficient *
         std::pow(config.effective_power_mw(), config.power_exponent);
}

std::uint32_t sample_pair_numbers(Rng& rng, double mu) {
  if (mu < 0.0) throw std::invalid_argument("source: mu must be >= 0");
  return rng.thermal(mu);
}

PhotonNumberDistribution photon_number_distribution(double mu, int n_max) {
  if (mu < 0.0) throw std::invalid_argument("source: mu must be >= 0");
  if (n_max < 0) throw std::invalid_argument("source: n_max must be >= 0");
  PhotonNumberDistribution dist;
  dist.probabilities.resize(n_max + 1);
  const double ratio = mu / (1.0 + mu);
  double p = 1.0 / (1.0 + mu);
  double cumulative = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    dist.probabilities[n] = p;
    cumulative += p;
    p *= ratio;
  }
  dist.tail = std::max(0.0, 1.0 - cumulative);
  return dist;
}

std::vector<PairBatch> sample_batches(const SourceConfig& config, Rng& rng,
                                      std::uint64_t bins) {
  config.validate();
  const double mu = mean_pairs_per_bin(config, 0);
  std::vector<PairBatch> batches(bins);
  for (std::uint64_t b = 0; b < bins; ++b) {
    batches[b].bin_index = b;
    batches[b].pairs_per_mode.resize(config.mode_count);
    for (int m = 0; m < config.mode_count; ++m)
      batches[b].pairs_per_mode[m] = sample_pair_numbers(rng, mu);
  }
  return batches;
}

}  // namespace specmux::source
