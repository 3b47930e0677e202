#pragma once

#include <cstdint>
#include <vector>

#include "specmux/rng.hpp"
#include "specmux/spectral.hpp"

namespace specmux::feedforward {

/// Electro-optic shifter drive and trigger electronics. The voltage ramp
/// slope kappa and the modulator pi-voltage set the shift magnitude
/// delta_f = kappa / (2 Vpi); the trigger chain behaves as a low-pass
/// (Butterworth) filter of the side-mode heralding rate.
struct FeedForwardConfig {
  double v_pi_volts = 1.4;
  double ramp_up_vps = 3.5e10;     // kappa+, positive shift
  double ramp_down_vps = -3.5e10;  // kappa-, negative shift
  double shift_efficiency = 0.90;
  bool survival_enabled = true;
  double awg_f3db_mhz = 1.2;
  int butterworth_order = 2;
  /// Added to f_i1 triggers to line both ramp edges up with the delayed
  /// signal photon; timing bookkeeping only, the fiber loop matches it.
  double compensation_delay_ns = 0.0;

  void validate() const;
};

/// Signed frequency shift in GHz produced by a voltage ramp of slope kappa
/// (V/s) on a modulator with pi-voltage v_pi.
double frequency_shift_magnitude(double kappa_vps, double v_pi_volts);

/// Probability that a side-mode trigger survives the AWG chain at the given
/// heralding rate: the magnitude response of an order-n Butterworth low-pass,
/// 1/sqrt(1 + (R/f3dB)^(2n)). Monotone nonincreasing in the rate.
double trigger_survival_probability(double heralding_rate_khz,
                                    const FeedForwardConfig& config);

struct ShiftOutcome {
  bool attempted = false;
  bool trigger_survived = false;
  bool shift_applied = false;
  double resulting_frequency_thz = 0.0;
};

/// Herald clicks for one bin, one flag per heralding mode (f_i1, f_i2, f_i3).
struct HeraldClicks {
  std::uint64_t bin_index = 0;
  bool clicked[3] = {false, false, false};
};

/// A signal photon waiting at the modulator, labeled by the mode it was
/// generated in.
struct SignalPhoton {
  std::uint64_t bin_index = 0;
  int mode = 1;  // 0 = f_s+, 1 = f_s0, 2 = f_s-
  double frequency_thz = 0.0;
};

/// Applies the multiplexing rule to one timeline: an f_i1 click attempts a
/// down-shift of the paired f_s+ photon by one mode spacing, an f_i3 click an
/// up-shift of f_s-, f_i2 heralds without shifting. Attempts succeed with
/// probability shift_efficiency x survival(side-mode rate); failures leave
/// the photon at its original frequency. Streams must share the bin timeline.
std::vector<ShiftOutcome> apply_feedforward(
    const std::vector<HeraldClicks>& heralds,
    std::vector<SignalPhoton>& photons, const spectral::ModeGrid& grid,
    const FeedForwardConfig& config, double side_mode_rate_khz, Rng& rng);

}  // namespace specmux::feedforward
