#include "specmux/detection.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace specmux::detection {

void DetectorConfig::validate() const {
  if (efficiency < 0.0 || efficiency > 1.0)
    throw std::invalid_argument("detector: efficiency must be in [0,1]");
  if (dark_count_rate_hz < 0.0)
    throw std::invalid_argument("detector: dark rate must be >= 0");
}

void ClickStream::validate() const {
  for (std::size_t i = 1; i < bins.size(); ++i)
    if (bins[i] <= bins[i - 1])
      throw std::invalid_argument("click stream: bins must be strictly increasing");
}

void CoincidenceHistogram::write_csv(std::ostream& os) const {
  os << "delay_bins,count\n";
  for (std::size_t i = 0; i < delay_bins.size(); ++i)
    os << delay_bins[i] << "," << counts[i] << "\n";
}

double click_probability(std::uint32_t photons, double eta, double dark_prob) {
  const double miss = std::pow(1.0 - eta, static_cast<double>(photons));
  return 1.0 - miss * (1.0 - dark_prob);
}

ClickStream detect(std::span<const std::uint32_t> photons_per_bin,
                   double path_transmission, const DetectorConfig& config,
                   double bin_width_s, Rng& rng) {
  config.validate();
  if (path_transmission < 0.0 || path_transmission > 1.0)
    throw std::invalid_argument("detect: path transmission must be in [0,1]");
  const double eta = path_transmission * config.efficiency;
  const double dark_prob = config.dark_count_rate_hz * bin_width_s;
  ClickStream stream;
  stream.detector = config.label;
  for (std::size_t bin = 0; bin < photons_per_bin.size(); ++bin) {
    const double p = click_probability(photons_per_bin[bin], eta, dark_prob);
    if (p > 0.0 && rng.bernoulli(p)) stream.bins.push_back(bin);
  }
  return stream;
}

std::uint64_t coincidence_count(const ClickStream& a, const ClickStream& b,
                                std::int64_t delay, std::int64_t window) {
  if (window < 1) throw std::invalid_argument("coincidence: window must be >= 1");
  const std::int64_t lo = delay - (window - 1) / 2;
  const std::int64_t hi = delay + window / 2;
  std::uint64_t count = 0;
  std::size_t left = 0, right = 0;
  for (const std::uint64_t t_a : a.bins) {
    const std::int64_t wlo = static_cast<std::int64_t>(t_a) + lo;
    const std::int64_t whi = static_cast<std::int64_t>(t_a) + hi;
    while (left < b.bins.size() && static_cast<std::int64_t>(b.bins[left]) < wlo)
      ++left;
    if (right < left) right = left;
    while (right < b.bins.size() &&
           static_cast<std::int64_t>(b.bins[right]) <= whi)
      ++right;
    count += right - left;
  }
  return count;
}

CarResult car(const ClickStream& signal, const ClickStream& herald,
              std::int64_t true_delay, std::int64_t accidental_delay,
              std::int64_t window) {
  if (std::llabs(accidental_delay - true_delay) < window)
    throw std::invalid_argument("car: accidental delay overlaps the peak");
  CarResult result;
  result.true_counts = coincidence_count(herald, signal, true_delay, window);
  result.accidental_counts =
      coincidence_count(herald, signal, accidental_delay, window);
  const double ct = static_cast<double>(result.true_counts);
  if (result.accidental_counts == 0) {
    result.lower_bound = true;
    result.car.value = ct;
    result.car.error = std::sqrt(ct);
    return result;
  }
  const double ca = static_cast<double>(result.accidental_counts);
  result.car.value = ct / ca;
  result.car.error = result.car.value * std::sqrt(1.0 / ct + 1.0 / ca);
  return result;
}

std::vector<G2Point> g2_heralded(std::span<const std::uint64_t> c_abh,
                                 std::span<const std::uint64_t> c_ah,
                                 std::span<const std::int64_t> delays,
                                 std::uint64_t c_bh_zero,
                                 std::uint64_t heralds) {
  if (heralds == 0) throw std::invalid_argument("g2: no heralds");
  if (c_bh_zero == 0) throw std::invalid_argument("g2: C_BH(0) is zero");
  if (c_abh.size() != c_ah.size() || c_abh.size() != delays.size())
    throw std::invalid_argument("g2: histogram lengths differ");
  const double h = static_cast<double>(heralds);
  const double cbh = static_cast<double>(c_bh_zero);
  std::vector<G2Point> curve(delays.size());
  for (std::size_t i = 0; i < delays.size(); ++i) {
    curve[i].delay = delays[i];
    if (c_ah[i] == 0) {
      curve[i].undefined = true;
      continue;
    }
    const double triple = static_cast<double>(c_abh[i]);
    const double cah = static_cast<double>(c_ah[i]);
    curve[i].g2.value = triple * h / (cah * cbh);
    if (c_abh[i] > 0)
      curve[i].g2.error =
          curve[i].g2.value *
          std::sqrt(1.0 / triple + 1.0 / cah + 1.0 / cbh + 1.0 / h);
    else
      // Zero triples: quote the one-count upper scale as the uncertainty.
      curve[i].g2.error = h / (cah * cbh);
  }
  return curve;
}

double klyshko_efficiency(std::uint64_t coincidences,
                          std::uint64_t herald_singles) {
  if (herald_singles == 0)
    throw std::invalid_argument("klyshko: no herald singles");
  return static_cast<double>(coincidences) /
         static_cast<double>(herald_singles);
}

std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>> hbt_split(
    std::span<const std::uint32_t> photons_per_bin, Rng& rng) {
  std::vector<std::uint32_t> a(photons_per_bin.size(), 0);
  std::vector<std::uint32_t> b(photons_per_bin.size(), 0);
  for (std::size_t bin = 0; bin < photons_per_bin.size(); ++bin) {
    for (std::uint32_t k = 0; k < photons_per_bin[bin]; ++k) {
      if (rng.bernoulli(0.5))
        ++a[bin];
      else
        ++b[bin];
    }
  }
  return {std::move(a), std::move(b)};
}

}  // namespace specmux::detection
