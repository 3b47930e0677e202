#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <cstdlib>

#include "specmux/units.hpp"

namespace specmux::model {

/// Everything a single measurement run needs, reduced to per-bin, per-photon
/// probabilities. Assembled from the experiment configuration; shared by the
/// closed-form model, the enumeration oracle and the Monte-Carlo engine so
/// that all three describe the same physics.
///
/// Frequency positions are integers in units of the mode spacing:
/// 0 = f_s+, 1 = f_s0, 2 = f_s-. The modulator ramp is common mode: a firing
/// ramp displaces every photon inside the bin by one spacing, so a
/// down-conversion trigger moves f_s+ onto f_s0 and simultaneously moves
/// f_s0 off the output filter.
struct SystemModel {
  /// Mean pair number per bin for each spectral mode (f_s+/f_i1, f_s0/f_i2,
  /// f_s-/f_i3). Unused modes carry 0.
  std::array<double, 3> mu{};

  /// Probability that one idler photon of mode m produces a heralding click
  /// (fiber chain x channel loss x detector).
  std::array<double, 3> herald_eta{};

  /// Signal fiber chain transmission at the output-filter peak, detector
  /// device efficiencies excluded.
  double signal_path = 1.0;
  double det_signal = 1.0;  // direct measurement detector
  double det_a = 1.0;       // HBT branch detectors
  double det_b = 1.0;

  double channel_fwhm_ghz = 6.5;
  double channel_spacing_ghz = 12.5;
  double output_filter_fwhm_ghz = 12.5;

  /// Mean untwinned signal photons per bin per mode band, as a fraction of
  /// mu: the output filter accepts a band wider than the heralding channel,
  /// so (filter/channel - 1) extra signal photons have no detectable twin.
  double background_ratio = 12.5 / 6.5 - 1.0;

  bool multiplexing = false;
  /// Probability a triggered ramp lands (shift efficiency x trigger survival
  /// at the run's side-mode heralding rate, quasi-static).
  double shift_success = 1.0;

  /// Signal-mode index the output filter is parked on (1 = central).
  std::size_t tnf_position = 1;
  /// Channels recorded in the herald stream.
  std::array<bool, 3> herald_select{true, true, true};

  bool hbt = false;
  double dark_prob_herald = 0.0;  // per detector per bin
  double dark_prob_signal = 0.0;

  /// Average output-filter transmission of an untwinned band displaced by
  /// |k| spacings from the parked filter; filled by finalize().
  std::array<double, 4> background_profile{};

  /// Precomputes the band-average profile; must run before use.
  void finalize();

  /// Net position displacement for a given pair of ramp outcomes: the f_i1
  /// ramp moves every photon one position up in index (frequency down), the
  /// f_i3 ramp one position down.
  static int net_displacement(bool down_ramp_fired, bool up_ramp_fired) {
    return (down_ramp_fired ? 1 : 0) - (up_ramp_fired ? 1 : 0);
  }

  /// Output-filter profile for a point photon sitting `position` (integer,
  /// possibly outside [0,2]) relative to the parked filter.
  double tnf_profile(int position) const {
    const double offset =
        channel_spacing_ghz *
        std::abs(position - static_cast<int>(tnf_position));
    return gaussian_fwhm_profile(offset, output_filter_fwhm_ghz);
  }

  /// Per-photon detection probability of a pair photon at `position`,
  /// direct (non-HBT) measurement.
  double signal_q(int position) const {
    return signal_path * tnf_profile(position) * det_signal;
  }

  /// Per-photon detection probabilities into the two HBT branches.
  double hbt_qa(int position) const {
    return signal_path * tnf_profile(position) * 0.5 * det_a;
  }
  double hbt_qb(int position) const {
    return signal_path * tnf_profile(position) * 0.5 * det_b;
  }

  /// Detection probabilities of an untwinned-band photon whose band sits
  /// `position` relative to the parked filter.
  double background_q(int position) const {
    return signal_path * band_profile(position) * det_signal;
  }
  double background_qa(int position) const {
    return signal_path * band_profile(position) * 0.5 * det_a;
  }
  double background_qb(int position) const {
    return signal_path * band_profile(position) * 0.5 * det_b;
  }

  double band_profile(int position) const {
    const int k = std::abs(position - static_cast<int>(tnf_position));
    return k < 4 ? background_profile[k] : 0.0;
  }

  static constexpr std::size_t tnf_center_mode() { return 1; }
};

}  // namespace specmux::model
