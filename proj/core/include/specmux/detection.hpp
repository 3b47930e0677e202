#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "specmux/rng.hpp"

namespace specmux::detection {

/// Threshold click detector without photon-number resolution. `efficiency`
/// is the device quantum efficiency; path losses enter separately as chain
/// transmissions.
struct DetectorConfig {
  double efficiency = 1.0;
  double dark_count_rate_hz = 0.0;
  std::string label;

  void validate() const;
};

/// Sorted bin indices where a detector clicked (at most one click per bin).
struct ClickStream {
  std::string detector;
  std::vector<std::uint64_t> bins;

  void validate() const;
};

struct CoincidenceHistogram {
  std::vector<std::int64_t> delay_bins;
  std::vector<std::uint64_t> counts;
  std::uint64_t total_bins = 0;

  /// CSV: delay, count.
  void write_csv(std::ostream& os) const;
};

struct ValueWithError {
  double value = 0.0;
  double error = 0.0;
};

/// Headline figures of merit for one run / sweep point; errors are Poisson
/// (sqrt N on raw counts, propagated to first order).
struct MetricsReport {
  ValueWithError hsp_rate_khz;
  ValueWithError car;
  bool car_is_lower_bound = false;
  ValueWithError g2_zero;
  double heralding_efficiency = 0.0;
};

/// Per-bin click probability: 1 - (1-eta)^n (1-p_dark).
double click_probability(std::uint32_t photons, double eta, double dark_prob);

/// Detect per-bin photon counts with total efficiency eta (path x device)
/// and the configured dark rate; bin_width_s converts the dark rate to a
/// per-bin probability.
ClickStream detect(std::span<const std::uint32_t> photons_per_bin,
                   double path_transmission, const DetectorConfig& config,
                   double bin_width_s, Rng& rng);

/// Number of pairs (t_a, t_b) with t_b - t_a in the window of `window` bins
/// centered on `delay`: [delay - (window-1)/2, delay + window/2].
std::uint64_t coincidence_count(const ClickStream& a, const ClickStream& b,
                                std::int64_t delay, std::int64_t window = 1);

struct CarResult {
  ValueWithError car;
  std::uint64_t true_counts = 0;
  std::uint64_t accidental_counts = 0;
  /// Zero accidentals: `car` holds the lower bound C_true / 1.
  bool lower_bound = false;
};

/// Coincidences-to-accidentals ratio between a signal and a herald stream;
/// the accidental delay must sit beyond the coincidence peak.
CarResult car(const ClickStream& signal, const ClickStream& herald,
              std::int64_t true_delay, std::int64_t accidental_delay,
              std::int64_t window = 1);

struct G2Point {
  std::int64_t delay = 0;
  ValueWithError g2;
  bool undefined = false;  // zero denominator at this delay
};

/// Heralded second-order correlation, pointwise over the delay axis:
/// g2(tau) = C_ABH(tau) H / (C_AH(tau) C_BH(0)).
std::vector<G2Point> g2_heralded(std::span<const std::uint64_t> c_abh,
                                 std::span<const std::uint64_t> c_ah,
                                 std::span<const std::int64_t> delays,
                                 std::uint64_t c_bh_zero, std::uint64_t heralds);

/// Klyshko arm efficiency: coincidences over herald singles. When comparing
/// a heralding arm against its transmission chain, the filter-bandwidth
/// ratio (channel / output filter) multiplies the chain first.
double klyshko_efficiency(std::uint64_t coincidences,
                          std::uint64_t herald_singles);

/// Balanced splitter: each photon routed to one of the two outputs with
/// probability 1/2; detectors are applied downstream.
std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>> hbt_split(
    std::span<const std::uint32_t> photons_per_bin, Rng& rng);

}  // namespace specmux::detection
