#include "specmux/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "specmux/units.hpp"

namespace specmux::spectral {

namespace {

constexpr double kIdlerCenter2Thz = 193.5117;   // f_i2
constexpr double kSignalCenter0Thz = 195.6881;  // f_s0

}  // namespace

void FilterBank::validate() const {
  if (channels.size() != insertion_loss_db.size())
    throw std::invalid_argument("filter bank: loss list must match channels");
  for (std::size_t i = 0; i < channels.size(); ++i) {
    if (!channels[i].valid())
      throw std::invalid_argument("filter bank: channel fwhm must be > 0");
    if (insertion_loss_db[i] < 0.0)
      throw std::invalid_argument("filter bank: insertion loss must be >= 0 dB");
    if (i > 0 && channels[i].center_thz <= channels[i - 1].center_thz)
      throw std::invalid_argument(
          "filter bank: channels must be sorted by center with distinct centers");
  }
}

double FilterBank::transmission(double f_thz) const {
  double total = 0.0;
  for (std::size_t i = 0; i < channels.size(); ++i)
    total += channel_transmission(i, f_thz);
  return total;
}

double FilterBank::channel_transmission(std::size_t index, double f_thz) const {
  return db_to_transmission(insertion_loss_db[index]) *
         filter_transmission(channels[index], f_thz);
}

double filter_transmission(const SpectralMode& mode, double f_thz) {
  const double offset_ghz = (f_thz - mode.center_thz) * kGhzPerThz;
  return gaussian_fwhm_profile(offset_ghz, mode.fwhm_ghz);
}

void ModeGrid::validate() const {
  if (channel_fwhm_ghz <= 0.0 || channel_spacing_ghz <= 0.0 ||
      output_filter_fwhm_ghz <= 0.0)
    throw std::invalid_argument("mode grid: widths and spacing must be > 0");
  for (std::size_t m = 0; m < 3; ++m) {
    const double sum = signal_centers_thz[m] + idler_centers_thz[m];
    if (std::abs(sum - pair_sum_thz) * kGhzPerThz > 1e-6)  // 1 kHz slack
      throw std::invalid_argument("mode grid: pair sums must all equal pair_sum_thz");
  }
  for (std::size_t m = 1; m < 3; ++m) {
    const double d_i =
        (idler_centers_thz[m] - idler_centers_thz[m - 1]) * kGhzPerThz;
    if (std::abs(d_i - channel_spacing_ghz) > 1e-6)
      throw std::invalid_argument("mode grid: heralding channels must sit on the spacing grid");
  }
}

SpectralMode ModeGrid::idler_channel(std::size_t m) const {
  static const char* labels[3] = {"f_i1", "f_i2", "f_i3"};
  return {labels[m], idler_centers_thz[m], channel_fwhm_ghz};
}

SpectralMode ModeGrid::signal_mode(std::size_t m) const {
  static const char* labels[3] = {"f_s+", "f_s0", "f_s-"};
  return {labels[m], signal_centers_thz[m], channel_fwhm_ghz};
}

SpectralMode ModeGrid::output_filter(double center_thz) const {
  return {"tnf", center_thz, output_filter_fwhm_ghz};
}

ModeGrid default_mode_grid() {
  ModeGrid grid;
  const double spacing_thz = 12.5 / kGhzPerThz;
  grid.idler_centers_thz = {kIdlerCenter2Thz - spacing_thz, kIdlerCenter2Thz,
                            kIdlerCenter2Thz + spacing_thz};
  grid.signal_centers_thz = {kSignalCenter0Thz + spacing_thz, kSignalCenter0Thz,
                             kSignalCenter0Thz - spacing_thz};
  // Pinned to the mode grid itself so the pairings hold exactly; the quoted
  // pump wavelength is not exactly the frequency midpoint of the combs.
  grid.pair_sum_thz = kIdlerCenter2Thz + kSignalCenter0Thz;
  grid.validate();
  return grid;
}

FilterBank make_heralding_bank(const ModeGrid& grid,
                               const std::array<double, 3>& loss_db) {
  FilterBank bank;
  for (std::size_t m = 0; m < 3; ++m) {
    bank.channels.push_back(grid.idler_channel(m));
    bank.insertion_loss_db.push_back(loss_db[m]);
  }
  bank.validate();
  return bank;
}

double jsi_value(double f_s_thz, double f_i_thz, double pump_bandwidth_ghz,
                 double pair_sum_thz, const JsiFilters& filters) {
  if (pump_bandwidth_ghz <= 0.0)
    throw std::invalid_argument("jsi_value: pump bandwidth must be > 0");
  // Anti-diagonal cut f -> (f_s + f, f_i + f) must have FWHM equal to the
  // pump bandwidth; the detuning f_s + f_i - pair_sum advances twice as fast.
  const double detuning_ghz = (f_s_thz + f_i_thz - pair_sum_thz) * kGhzPerThz;
  double intensity =
      gaussian_fwhm_profile(detuning_ghz, 2.0 * pump_bandwidth_ghz);
  if (filters.signal) intensity *= filters.signal->transmission(f_s_thz);
  if (filters.idler) intensity *= filters.idler->transmission(f_i_thz);
  return intensity;
}

JsiScenario parse_jsi_scenario(const std::string& name) {
  if (name == "unfiltered") return JsiScenario::unfiltered;
  if (name == "heralding_bank") return JsiScenario::heralding_bank;
  if (name == "multiplexed") return JsiScenario::multiplexed;
  throw std::invalid_argument("unknown jsi scenario: " + name);
}

std::string to_string(JsiScenario scenario) {
  switch (scenario) {
    case JsiScenario::unfiltered: return "unfiltered";
    case JsiScenario::heralding_bank: return "heralding_bank";
    case JsiScenario::multiplexed: return "multiplexed";
  }
  throw std::invalid_argument("unknown jsi scenario value");
}

double& JsiGrid::at(std::size_t idler_idx, std::size_t signal_idx) {
  return intensity[idler_idx * signal_axis_thz.size() + signal_idx];
}

double JsiGrid::at(std::size_t idler_idx, std::size_t signal_idx) const {
  return intensity[idler_idx * signal_axis_thz.size() + signal_idx];
}

std::vector<double> JsiGrid::signal_marginal() const {
  std::vector<double> marginal(signal_axis_thz.size(), 0.0);
  for (std::size_t i = 0; i < idler_axis_thz.size(); ++i)
    for (std::size_t s = 0; s < signal_axis_thz.size(); ++s)
      marginal[s] += at(i, s);
  return marginal;
}

std::vector<double> JsiGrid::idler_marginal() const {
  std::vector<double> marginal(idler_axis_thz.size(), 0.0);
  for (std::size_t i = 0; i < idler_axis_thz.size(); ++i)
    for (std::size_t s = 0; s < signal_axis_thz.size(); ++s)
      marginal[i] += at(i, s);
  return marginal;
}

void JsiGrid::write_csv(std::ostream& os) const {
  char buf[64];
  os << "f_i_thz";
  for (double f : signal_axis_thz) {
    std::snprintf(buf, sizeof buf, ",%.6f", f);
    os << buf;
  }
  os << "\n";
  for (std::size_t i = 0; i < idler_axis_thz.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.6f", idler_axis_thz[i]);
    os << buf;
    for (std::size_t s = 0; s < signal_axis_thz.size(); ++s) {
      std::snprintf(buf, sizeof buf, ",%.6g", at(i, s));
      os << buf;
    }
    os << "\n";
  }
}

namespace {

std::vector<double> axis(double start_thz, double stop_thz, double step_ghz) {
  std::vector<double> values;
  const double step_thz = step_ghz / kGhzPerThz;
  const int n = static_cast<int>(std::round((stop_thz - start_thz) / step_thz));
  values.reserve(n + 1);
  for (int k = 0; k <= n; ++k) values.push_back(start_thz + k * step_thz);
  return values;
}

}  // namespace

JsiGrid jsi_sweep(const JsiSweepConfig& config, JsiScenario scenario) {
  config.grid.validate();
  JsiGrid grid;
  grid.signal_axis_thz =
      axis(config.signal_start_thz, config.signal_stop_thz, config.step_ghz);
  grid.idler_axis_thz =
      axis(config.idler_start_thz, config.idler_stop_thz, config.step_ghz);
  grid.intensity.assign(grid.signal_axis_thz.size() * grid.idler_axis_thz.size(),
                        0.0);

  const FilterBank bank =
      make_heralding_bank(config.grid, config.heralding_loss_db);
  const double spacing_thz = config.grid.channel_spacing_ghz / kGhzPerThz;
  // Side photons move toward the central signal mode: a photon measured at
  // f_s after a down (up) shift was generated at f_s + spacing (f_s - spacing).
  const double pre_shift_offset[3] = {spacing_thz, 0.0, -spacing_thz};

  for (std::size_t i = 0; i < grid.idler_axis_thz.size(); ++i) {
    const double f_i = grid.idler_axis_thz[i];
    for (std::size_t s = 0; s < grid.signal_axis_thz.size(); ++s) {
      const double f_s = grid.signal_axis_thz[s];
      double value = 0.0;
      switch (scenario) {
        case JsiScenario::unfiltered:
          value = jsi_value(f_s, f_i, config.pump_bandwidth_ghz,
                            config.grid.pair_sum_thz);
          break;
        case JsiScenario::heralding_bank: {
          JsiFilters filters;
          filters.idler = bank;
          value = jsi_value(f_s, f_i, config.pump_bandwidth_ghz,
                            config.grid.pair_sum_thz, filters);
          break;
        }
        case JsiScenario::multiplexed:
          // Heralding in channel m relocates the signal photon onto the
          // central row; coincidences measured at f_s came from a photon
          // generated at f_s + pre_shift_offset[m].
          for (std::size_t m = 0; m < 3; ++m) {
            const double f_s_generated = f_s + pre_shift_offset[m];
            value += jsi_value(f_s_generated, f_i, config.pump_bandwidth_ghz,
                               config.grid.pair_sum_thz) *
                     bank.channel_transmission(m, f_i);
          }
          break;
      }
      grid.at(i, s) = value;
    }
  }
  return grid;
}

double antidiagonal_fwhm_ghz(const JsiGrid& grid, double pair_sum_thz) {
  // Collect the cut f -> (f_s0 + f, f_i0 + f) through the nearest ridge
  // crossing of the grid diagonal.
  const std::size_t n =
      std::min(grid.signal_axis_thz.size(), grid.idler_axis_thz.size());
  std::size_t best = 0;
  double best_detuning = 1e300;
  for (std::size_t k = 0; k < n; ++k) {
    const double detuning =
        std::abs(grid.signal_axis_thz[k] + grid.idler_axis_thz[k] - pair_sum_thz);
    if (detuning < best_detuning) {
      best_detuning = detuning;
      best = k;
    }
  }

  // log I(t) = a t^2 + b t + c along the cut; for a Gaussian profile the
  // curvature gives the width exactly, independent of sampling.
  double s0 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0, sy = 0, sty = 0, st2y = 0;
  const double peak = grid.at(best, best);
  if (peak <= 0.0) throw std::invalid_argument("antidiagonal cut has no ridge");
  for (std::size_t k = 0; k < n; ++k) {
    const double value = grid.at(k, k);
    if (value < 1e-6 * peak) continue;
    const double t =
        (grid.signal_axis_thz[k] - grid.signal_axis_thz[best]) * kGhzPerThz;
    const double y = std::log(value);
    s0 += 1; s1 += t; s2 += t * t; s3 += t * t * t; s4 += t * t * t * t;
    sy += y; sty += t * y; st2y += t * t * y;
  }
  // Solve the 3x3 normal equations for [c, b, a].
  const double m[3][3] = {{s0, s1, s2}, {s1, s2, s3}, {s2, s3, s4}};
  const double rhs[3] = {sy, sty, st2y};
  const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                     m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                     m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  if (std::abs(det) < 1e-30) throw std::invalid_argument("degenerate ridge cut");
  const double det_a = m[0][0] * (m[1][1] * rhs[2] - m[1][2] * rhs[1]) -
                       m[0][1] * (m[1][0] * rhs[2] - m[1][2] * rhs[0]) +
                       rhs[0] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  const double a = det_a / det;
  if (a >= 0.0) throw std::invalid_argument("ridge cut is not peaked");
  return std::sqrt(-4.0 * M_LN2 / a);
}

std::vector<std::pair<std::size_t, std::size_t>> local_maxima(
    const JsiGrid& grid, double floor) {
  const std::size_t rows = grid.idler_axis_thz.size();
  const std::size_t cols = grid.signal_axis_thz.size();
  const double peak = *std::max_element(grid.intensity.begin(), grid.intensity.end());
  std::vector<std::pair<std::size_t, std::size_t>> maxima;
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t s = 0; s < cols; ++s) {
      const double v = grid.at(i, s);
      if (v < floor * peak) continue;
      bool is_max = true;
      for (int di = -1; di <= 1 && is_max; ++di) {
        for (int ds = -1; ds <= 1; ++ds) {
          if (di == 0 && ds == 0) continue;
          const std::ptrdiff_t ni = static_cast<std::ptrdiff_t>(i) + di;
          const std::ptrdiff_t ns = static_cast<std::ptrdiff_t>(s) + ds;
          if (ni < 0 || ns < 0 || ni >= static_cast<std::ptrdiff_t>(rows) ||
              ns >= static_cast<std::ptrdiff_t>(cols))
            continue;
          if (grid.at(ni, ns) >= v) {
            is_max = false;
            break;
          }
        }
      }
      if (is_max) maxima.emplace_back(i, s);
    }
  }
  return maxima;
}

}  // namespace specmux::spectral
