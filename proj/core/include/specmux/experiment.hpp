#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "specmux/config.hpp"
#include "specmux/detection.hpp"
#include "specmux/engine.hpp"

namespace specmux::experiment {

/// One engine run reduced to rate/CAR metrics.
struct MeasuredPoint {
  double power_mw = 0.0;
  detection::ValueWithError rate_khz;
  detection::ValueWithError car;
  bool car_lower_bound = false;
  /// Klyshko signal-arm efficiency: coincidences / herald singles.
  double heralding_efficiency = 0.0;
  engine::EngineResult raw;
};

MeasuredPoint measure_rates(const config::ExperimentConfig& config,
                            const config::Measurement& measurement,
                            double power_mw, std::uint64_t bins,
                            std::uint64_t seed);

/// One HBT engine run reduced to the heralded correlation.
struct MeasuredG2 {
  double power_mw = 0.0;
  detection::ValueWithError g2_zero;
  bool g2_defined = false;
  std::uint64_t triples = 0;
  std::vector<detection::G2Point> curve;
  engine::EngineResult raw;
};

MeasuredG2 measure_g2(const config::ExperimentConfig& config,
                      const config::Measurement& measurement, double power_mw,
                      std::uint64_t bins, std::uint64_t seed);

/// Low-power enhancement estimate from a rate sweep: multiplexed rate over
/// the mean of the three single-mode rates, averaged over the sweep points
/// at or below the configured low-power threshold.
struct EnhancementSummary {
  detection::ValueWithError low_power;
  double theory = 0.0;
};

struct RunResult {
  std::string run_id;
  std::string scenario;
  nlohmann::json metrics;
  std::vector<std::filesystem::path> files;
  double wall_seconds = 0.0;
  std::uint64_t total_bins = 0;
  double bins_per_second = 0.0;
};

/// Executes the configured scenario and writes
/// <out_root>/<run_id>/<scenario>.csv (plus scenario-specific aux files),
/// metrics.json and config.echo. Identical config and seed produce
/// byte-identical outputs.
RunResult run_scenario(const config::ExperimentConfig& config,
                       const std::filesystem::path& out_root);

}  // namespace specmux::experiment
