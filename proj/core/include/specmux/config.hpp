#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "specmux/detection.hpp"
#include "specmux/feedforward.hpp"
#include "specmux/hom.hpp"
#include "specmux/source.hpp"
#include "specmux/spectral.hpp"
#include "specmux/system.hpp"

namespace specmux::config {

/// Component insertion losses (dB) of the fiber chains; detector device
/// efficiencies live in the detector entries.
struct LossTable {
  double ppln_coupling_db = 2.50;
  double dwdm_signal_db = 1.83;
  double dwdm_heralding_db = 2.21;
  std::array<double, 3> narrowband_dwdm_db = {4.58, 4.58, 4.60};
  double delay_fiber_db = 0.40;
  double eom_db = 4.56;
  double tnf_db = 5.30;
  /// Extra loss of the f_i1 channel while the multiplexer runs; the
  /// documented budget above excludes it.
  double fi1_excess_db = 1.0;

  void validate() const;
  double signal_chain_db() const;
  double heralding_chain_db(std::size_t mode, bool with_excess) const;
};

struct AcquisitionConfig {
  std::uint64_t bins = 2'000'000'000ull;
  std::uint64_t batch_bins = 1ull << 22;
  std::int64_t coincidence_window = 1;
  int g2_max_delay = 32;
  /// Accidental comb: +/- (start + k*step) for k in [0, count/2).
  std::int64_t accidental_start = 16;
  std::int64_t accidental_step = 16;
  int accidental_count = 32;

  void validate() const;
  std::vector<std::int64_t> accidental_offsets() const;
};

struct SweepConfig {
  std::vector<double> powers_mw = {1.0, 2.0, 3.0, 4.0, 6.0, 8.0, 11.0, 14.0, 16.98};
  /// Points at or below this power enter the low-power enhancement estimate.
  double low_power_threshold_mw = 4.0;
};

struct JsiConfig {
  double pump_bandwidth_ghz = 6.4;
  double step_ghz = 2.5;
  double idler_start_thz = 193.4867;
  double idler_stop_thz = 193.5367;
  double signal_start_thz = 195.6631;
  double signal_stop_thz = 195.7131;
  /// Scenarios to emit; empty means all three.
  std::vector<std::string> scenarios;
};

enum class Scenario {
  rate_vs_power,
  car_vs_rate,
  g2_vs_rate,
  jsi_map,
  hom_scan,
  loss_budget,
};

Scenario parse_scenario(const std::string& name);
std::string to_string(Scenario scenario);

struct ExperimentConfig {
  std::string run_id = "run";
  std::uint64_t seed = 1;
  Scenario scenario = Scenario::rate_vs_power;
  source::SourceConfig source;
  feedforward::FeedForwardConfig feedforward;
  spectral::ModeGrid grid;
  LossTable losses;
  /// f_i1, f_i2, f_i3, signal, hbt_a, hbt_b.
  std::vector<detection::DetectorConfig> detectors;
  AcquisitionConfig acquisition;
  SweepConfig sweep;
  JsiConfig jsi;
  hom::HomConfig hom;
  int threads = 0;

  void validate() const;
  const detection::DetectorConfig& detector(const std::string& label) const;
};

/// Which physical arrangement a run measures.
struct Measurement {
  bool multiplexed = true;
  /// Park position of the output filter and the heralding channel used when
  /// not multiplexing.
  std::size_t single_mode = 1;
  bool hbt = false;
};

/// Reduce a configuration to per-bin probabilities at the given pump power;
/// this includes evaluating the trigger-survival factor at the run's
/// side-mode heralding rate.
model::SystemModel build_system_model(const ExperimentConfig& config,
                                      const Measurement& measurement,
                                      double pump_power_mw);

/// All the paper-matched defaults, with the gain coefficient calibrated so
/// the multiplexed HSP rate at 16.98 mW lands on 23.6 kHz.
ExperimentConfig paper2021_preset();

/// Lossless, symmetric, unit-shift-efficiency variant used for the
/// theoretical-limit checks.
ExperimentConfig ideal_preset();

const std::vector<std::string>& preset_names();
ExperimentConfig preset(const std::string& name);

/// Fit the gain coefficient so the multiplexed HSP rate at `power_mw`
/// equals `target_khz` under the closed-form model.
double calibrate_gain(const ExperimentConfig& config, double power_mw,
                      double target_khz);

std::string to_json_string(const ExperimentConfig& config);
ExperimentConfig from_json_string(const std::string& text);
ExperimentConfig load_file(const std::string& path);
void save_file(const ExperimentConfig& config, const std::string& path);

}  // namespace specmux::config
