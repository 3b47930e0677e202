#pragma once

#include <array>

#include "specmux/system.hpp"

namespace specmux::analytic {

/// Closed-form/enumerated per-bin probabilities for the thermal sources
/// behind threshold detectors, with the ramp branching of the multiplexer
/// folded in. The enumeration is the reference the Monte-Carlo engine is
/// held to.

/// P(at least one heralding click of a mode with mean mu in a bin), photon
/// part only: 1 - 1/(1 + mu eta) for thermal statistics.
double herald_click_probability(double mu, double eta);

/// P(any selected heralding channel clicks in a bin), darks included.
double herald_probability(const model::SystemModel& m);

/// P(signal detector clicks in a bin), darks included (direct measurement).
double signal_probability(const model::SystemModel& m);

/// P(herald AND signal click in the same bin): the true-coincidence
/// probability.
double coincidence_probability(const model::SystemModel& m);

/// Combined side-mode (f_i1 + f_i3) heralding rate in kHz; the quasi-static
/// drive rate of the trigger-survival model.
double side_mode_rate_khz(const model::SystemModel& m, double bins_per_second);

/// Heralded single photon rate in kHz.
double hsp_rate_khz(const model::SystemModel& m, double bins_per_second);

/// CAR for a 1-bin window: coincidence probability over the product of the
/// singles probabilities.
double car(const model::SystemModel& m);

struct G2OracleResult {
  double g2_zero = 0.0;
  double herald_probability = 0.0;
  double triple_probability = 0.0;
};

/// Brute-force heralded g2(0): enumerate the thermal photon-number
/// distribution of every mode up to n_max together with the ramp branches,
/// propagate losses and the balanced splitter analytically, and evaluate the
/// heralded correlation as C_ABH H / (C_AH C_BH) on the resulting per-bin
/// probabilities.
G2OracleResult g2_heralded_oracle(const model::SystemModel& m, int n_max = 8);

/// Ratio of multiplexed HSP rate to the mean of the three single-mode rates
/// at the same pump setting. `singles[k]` must describe the same source with
/// the output filter parked on mode k and only channel k heralding.
double enhancement_factor(const model::SystemModel& mux,
                          const std::array<model::SystemModel, 3>& singles,
                          double bins_per_second);

}  // namespace specmux::analytic
