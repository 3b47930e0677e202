#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace specmux::spectral {

/// One frequency channel with a Gaussian transmission profile.
struct SpectralMode {
  std::string label;
  double center_thz = 0.0;
  double fwhm_ghz = 0.0;

  bool valid() const { return fwhm_ghz > 0.0; }
};

/// A set of channels with per-channel insertion loss (dB). Channels must be
/// sorted by center frequency with distinct centers.
struct FilterBank {
  std::vector<SpectralMode> channels;
  std::vector<double> insertion_loss_db;

  void validate() const;
  /// Power transmission through the bank at frequency f: the sum over
  /// channels of profile x channel loss. Channels route to distinct outputs,
  /// so transmissions add.
  double transmission(double f_thz) const;
  /// Transmission through one channel only (profile x its insertion loss).
  double channel_transmission(std::size_t index, double f_thz) const;
};

/// Transmission in [0,1] of a single Gaussian channel at frequency f,
/// peaking at 1 at the channel center.
double filter_transmission(const SpectralMode& mode, double f_thz);

/// The frequency layout of the three-mode source: heralding channels
/// f_i1 < f_i2 < f_i3 paired (by energy conservation) with signal centers
/// f_s+ > f_s0 > f_s-, plus the output filter profile.
struct ModeGrid {
  /// Heralding channel centers, ascending in frequency (index 0 = f_i1).
  std::array<double, 3> idler_centers_thz;
  /// Signal centers; index m pairs with idler index m (index 0 = f_s+).
  std::array<double, 3> signal_centers_thz;
  double channel_fwhm_ghz = 6.5;
  double channel_spacing_ghz = 12.5;
  double output_filter_fwhm_ghz = 12.5;
  /// Energy-conservation constant: signal + idler frequency of every pair.
  double pair_sum_thz = 0.0;
  /// Index of the common output mode (f_s0).
  static constexpr std::size_t central_mode = 1;

  void validate() const;
  SpectralMode idler_channel(std::size_t m) const;
  SpectralMode signal_mode(std::size_t m) const;
  SpectralMode output_filter(double center_thz) const;
};

/// Mode grid of the three-channel demonstration: 12.5 GHz spacing,
/// 6.5 GHz channels, idler comb around 193.5117 THz and signal comb
/// around 195.6881 THz.
ModeGrid default_mode_grid();

/// Heralding-arm narrowband bank on the grid with the given per-channel
/// losses; enforces grid spacing and channel width.
FilterBank make_heralding_bank(const ModeGrid& grid,
                               const std::array<double, 3>& loss_db);

/// Optional filters applied multiplicatively to the joint spectrum.
struct JsiFilters {
  std::optional<FilterBank> signal;
  std::optional<FilterBank> idler;
};

/// Pointwise joint spectral intensity at (f_s, f_i): a Gaussian ridge in
/// f_s + f_i - pair_sum whose anti-diagonal cross section (equal detuning on
/// both axes) has the pump FWHM, times any filter transmissions. The
/// phase-matching envelope is flat over the simulated window.
double jsi_value(double f_s_thz, double f_i_thz, double pump_bandwidth_ghz,
                 double pair_sum_thz, const JsiFilters& filters = {});

enum class JsiScenario {
  unfiltered,    // bare source
  heralding_bank,// narrowband bank in the idler arm, no multiplexing
  multiplexed,   // side islands relocated onto the central signal row
};

JsiScenario parse_jsi_scenario(const std::string& name);
std::string to_string(JsiScenario scenario);

struct JsiGrid {
  std::vector<double> signal_axis_thz;
  std::vector<double> idler_axis_thz;
  /// Row-major [idler][signal], all entries >= 0.
  std::vector<double> intensity;

  double& at(std::size_t idler_idx, std::size_t signal_idx);
  double at(std::size_t idler_idx, std::size_t signal_idx) const;
  std::vector<double> signal_marginal() const;
  std::vector<double> idler_marginal() const;
  /// CSV: header row of signal-axis THz values, first column idler-axis
  /// THz values, intensities with 6 significant digits.
  void write_csv(std::ostream& os) const;
};

struct JsiSweepConfig {
  ModeGrid grid;
  double pump_bandwidth_ghz = 6.4;
  std::array<double, 3> heralding_loss_db = {4.58, 4.58, 4.60};
  /// Sweep windows (swept-filter emulation): 2.5 GHz steps, 21 x 21 cells.
  double idler_start_thz = 193.4867;
  double idler_stop_thz = 193.5367;
  double signal_start_thz = 195.6631;
  double signal_stop_thz = 195.7131;
  double step_ghz = 2.5;
};

/// Coincidence-intensity grid for one measurement scenario.
JsiGrid jsi_sweep(const JsiSweepConfig& config, JsiScenario scenario);

/// FWHM of the anti-diagonal cut through the ridge center, parameterized by
/// the common detuning applied to both axes. Recovered by a least-squares
/// parabola on log intensity, which is exact for Gaussian profiles.
double antidiagonal_fwhm_ghz(const JsiGrid& grid, double pair_sum_thz);

/// Grid cells that are strict local maxima over their 8-neighborhood (cells
/// below `floor` x global max are ignored).
std::vector<std::pair<std::size_t, std::size_t>> local_maxima(
    const JsiGrid& grid, double floor = 1e-3);

}  // namespace specmux::spectral
