#include "specmux/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "specmux/analytic.hpp"
#include "specmux/hom.hpp"
#include "specmux/units.hpp"

namespace specmux::experiment {

namespace {

using config::ExperimentConfig;
using config::Measurement;
using detection::ValueWithError;
using nlohmann::json;

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

engine::EngineConfig make_engine_config(const ExperimentConfig& config,
                                        const model::SystemModel& m,
                                        std::uint64_t bins,
                                        std::uint64_t seed) {
  engine::EngineConfig ec;
  ec.model = m;
  ec.bins = bins;
  ec.batch_bins = config.acquisition.batch_bins;
  ec.seed = seed;
  ec.threads = config.threads;
  ec.g2_max_delay = config.acquisition.g2_max_delay;
  ec.accidental_offsets = config.acquisition.accidental_offsets();
  return ec;
}

json value_error(const ValueWithError& v) {
  return {{"value", v.value}, {"error", v.error}};
}

}  // namespace

MeasuredPoint measure_rates(const ExperimentConfig& config,
                            const Measurement& measurement, double power_mw,
                            std::uint64_t bins, std::uint64_t seed) {
  const model::SystemModel m =
      config::build_system_model(config, measurement, power_mw);
  const engine::EngineResult raw =
      engine::run(make_engine_config(config, m, bins, seed));
  const engine::Tallies& t = raw.tallies;
  const double seconds =
      static_cast<double>(bins) / config.source.bins_per_second();

  MeasuredPoint point;
  point.power_mw = power_mw;
  point.raw = raw;
  const double coincidences = static_cast<double>(t.coincidences);
  point.rate_khz.value = coincidences / seconds / 1e3;
  point.rate_khz.error = std::sqrt(coincidences) / seconds / 1e3;
  if (t.accidentals == 0) {
    point.car_lower_bound = true;
    point.car.value = coincidences;
    point.car.error = std::sqrt(coincidences);
  } else {
    const double accidental_mean = static_cast<double>(t.accidentals) /
                                   static_cast<double>(t.accidental_windows);
    point.car.value = coincidences / accidental_mean;
    point.car.error = point.car.value *
                      std::sqrt(1.0 / std::max(coincidences, 1.0) +
                                1.0 / static_cast<double>(t.accidentals));
  }
  if (t.herald_singles > 0)
    point.heralding_efficiency =
        detection::klyshko_efficiency(t.coincidences, t.herald_singles);
  return point;
}

MeasuredG2 measure_g2(const ExperimentConfig& config,
                      const Measurement& measurement, double power_mw,
                      std::uint64_t bins, std::uint64_t seed) {
  Measurement hbt_measurement = measurement;
  hbt_measurement.hbt = true;
  const model::SystemModel m =
      config::build_system_model(config, hbt_measurement, power_mw);
  const engine::EngineResult raw =
      engine::run(make_engine_config(config, m, bins, seed));
  const engine::Tallies& t = raw.tallies;

  MeasuredG2 result;
  result.power_mw = power_mw;
  result.raw = raw;
  const int span = config.acquisition.g2_max_delay;
  std::vector<std::int64_t> delays(2 * span + 1);
  for (int i = 0; i <= 2 * span; ++i) delays[i] = i - span;
  if (t.herald_singles == 0 || t.c_bh.empty() || t.c_bh[span] == 0)
    return result;
  result.curve = detection::g2_heralded(t.c_abh, t.c_ah, delays, t.c_bh[span],
                                        t.herald_singles);
  const auto& zero = result.curve[span];
  result.triples = t.c_abh[span];
  if (!zero.undefined) {
    result.g2_defined = true;
    result.g2_zero = zero.g2;
  }
  return result;
}

namespace {

struct SweepRates {
  std::vector<MeasuredPoint> mux;
  std::vector<std::array<MeasuredPoint, 3>> singles;
  std::vector<double> theory_mux_khz;
  std::vector<double> theory_single_khz;  // mean of the three modes
  std::vector<double> theory_enhancement;
  std::vector<double> theory_car;
};

SweepRates run_rate_sweep(const ExperimentConfig& config) {
  SweepRates sweep;
  const double bps = config.source.bins_per_second();
  for (std::size_t i = 0; i < config.sweep.powers_mw.size(); ++i) {
    const double power = config.sweep.powers_mw[i];
    sweep.mux.push_back(measure_rates(config, Measurement{true, 1, false},
                                      power, config.acquisition.bins,
                                      derive_seed(config.seed, i * 8)));
    std::array<MeasuredPoint, 3> singles;
    std::array<model::SystemModel, 3> single_models;
    for (std::size_t mode = 0; mode < 3; ++mode) {
      singles[mode] =
          measure_rates(config, Measurement{false, mode, false}, power,
                        config.acquisition.bins,
                        derive_seed(config.seed, i * 8 + 1 + mode));
      single_models[mode] =
          config::build_system_model(config, Measurement{false, mode, false}, power);
    }
    sweep.singles.push_back(singles);

    const model::SystemModel mux_model =
        config::build_system_model(config, Measurement{true, 1, false}, power);
    sweep.theory_mux_khz.push_back(analytic::hsp_rate_khz(mux_model, bps));
    double mean_single = 0.0;
    for (const auto& sm : single_models)
      mean_single += analytic::hsp_rate_khz(sm, bps);
    sweep.theory_single_khz.push_back(mean_single / 3.0);
    sweep.theory_enhancement.push_back(
        analytic::enhancement_factor(mux_model, single_models, bps));
    sweep.theory_car.push_back(analytic::car(mux_model));
  }
  return sweep;
}

ValueWithError enhancement_at(const SweepRates& sweep, std::size_t i) {
  const MeasuredPoint& mux = sweep.mux[i];
  double sum = 0.0, err_sq = 0.0;
  for (const auto& s : sweep.singles[i]) {
    sum += s.rate_khz.value;
    err_sq += s.rate_khz.error * s.rate_khz.error;
  }
  const double mean = sum / 3.0;
  ValueWithError e;
  if (mean <= 0.0 || mux.rate_khz.value <= 0.0) return e;
  e.value = mux.rate_khz.value / mean;
  const double rel_mux = mux.rate_khz.error / mux.rate_khz.value;
  const double rel_single = std::sqrt(err_sq) / sum;
  e.error = e.value * std::sqrt(rel_mux * rel_mux + rel_single * rel_single);
  return e;
}

EnhancementSummary summarize_enhancement(const ExperimentConfig& config,
                                         const SweepRates& sweep) {
  EnhancementSummary summary;
  double weight_sum = 0.0, value_sum = 0.0;
  double theory_sum = 0.0;
  int used = 0;
  for (std::size_t i = 0; i < config.sweep.powers_mw.size(); ++i) {
    if (config.sweep.powers_mw[i] > config.sweep.low_power_threshold_mw)
      continue;
    const ValueWithError e = enhancement_at(sweep, i);
    if (e.value <= 0.0 || e.error <= 0.0) continue;
    const double w = 1.0 / (e.error * e.error);
    weight_sum += w;
    value_sum += w * e.value;
    theory_sum += sweep.theory_enhancement[i];
    ++used;
  }
  if (weight_sum > 0.0) {
    summary.low_power.value = value_sum / weight_sum;
    summary.low_power.error = std::sqrt(1.0 / weight_sum);
    summary.theory = theory_sum / used;
  }
  return summary;
}

void accumulate_run_stats(RunResult& run, const engine::EngineResult& raw,
                          std::uint64_t bins) {
  run.total_bins += bins;
  run.wall_seconds += raw.wall_seconds;
}

// --------------------------------------------------------------------------
// Scenario payloads

void write_rate_vs_power(const ExperimentConfig& config, RunResult& run,
                         const std::filesystem::path& dir) {
  const SweepRates sweep = run_rate_sweep(config);
  std::ofstream csv(dir / "rate_vs_power.csv");
  csv << "power_mw,mux_rate_khz,mux_rate_err_khz,"
         "fsp_rate_khz,fsp_rate_err_khz,fs0_rate_khz,fs0_rate_err_khz,"
         "fsm_rate_khz,fsm_rate_err_khz,enhancement,enhancement_err,"
         "theory_mux_rate_khz,theory_enhancement\n";
  json points = json::array();
  for (std::size_t i = 0; i < config.sweep.powers_mw.size(); ++i) {
    const ValueWithError e = enhancement_at(sweep, i);
    csv << fmt(config.sweep.powers_mw[i]) << "," << fmt(sweep.mux[i].rate_khz.value)
        << "," << fmt(sweep.mux[i].rate_khz.error);
    for (const auto& s : sweep.singles[i])
      csv << "," << fmt(s.rate_khz.value) << "," << fmt(s.rate_khz.error);
    csv << "," << fmt(e.value) << "," << fmt(e.error) << ","
        << fmt(sweep.theory_mux_khz[i]) << "," << fmt(sweep.theory_enhancement[i])
        << "\n";

    json p;
    p["power_mw"] = config.sweep.powers_mw[i];
    p["mux_rate_khz"] = value_error(sweep.mux[i].rate_khz);
    p["fsp_rate_khz"] = value_error(sweep.singles[i][0].rate_khz);
    p["fs0_rate_khz"] = value_error(sweep.singles[i][1].rate_khz);
    p["fsm_rate_khz"] = value_error(sweep.singles[i][2].rate_khz);
    p["enhancement"] = value_error(e);
    p["theory_mux_rate_khz"] = sweep.theory_mux_khz[i];
    p["theory_enhancement"] = sweep.theory_enhancement[i];
    points.push_back(p);

    accumulate_run_stats(run, sweep.mux[i].raw, config.acquisition.bins);
    for (const auto& s : sweep.singles[i])
      accumulate_run_stats(run, s.raw, config.acquisition.bins);
  }
  const EnhancementSummary summary = summarize_enhancement(config, sweep);
  run.metrics["points"] = points;
  run.metrics["low_power_enhancement"] = value_error(summary.low_power);
  run.metrics["low_power_enhancement_theory"] = summary.theory;
  run.files.push_back(dir / "rate_vs_power.csv");
}

void write_car_vs_rate(const ExperimentConfig& config, RunResult& run,
                       const std::filesystem::path& dir) {
  const SweepRates sweep = run_rate_sweep(config);
  std::ofstream csv(dir / "car_vs_rate.csv");
  csv << "power_mw,mux_rate_khz,mux_car,mux_car_err,mux_car_lower_bound,"
         "fsp_rate_khz,fsp_car,fsp_car_err,fs0_rate_khz,fs0_car,fs0_car_err,"
         "fsm_rate_khz,fsm_car,fsm_car_err,theory_mux_car\n";
  json points = json::array();
  for (std::size_t i = 0; i < config.sweep.powers_mw.size(); ++i) {
    const MeasuredPoint& mux = sweep.mux[i];
    csv << fmt(config.sweep.powers_mw[i]) << "," << fmt(mux.rate_khz.value) << ","
        << fmt(mux.car.value) << "," << fmt(mux.car.error) << ","
        << (mux.car_lower_bound ? 1 : 0);
    for (const auto& s : sweep.singles[i])
      csv << "," << fmt(s.rate_khz.value) << "," << fmt(s.car.value) << ","
          << fmt(s.car.error);
    csv << "," << fmt(sweep.theory_car[i]) << "\n";

    json p;
    p["power_mw"] = config.sweep.powers_mw[i];
    p["mux_rate_khz"] = value_error(mux.rate_khz);
    p["mux_car"] = value_error(mux.car);
    p["mux_car_lower_bound"] = mux.car_lower_bound;
    p["theory_mux_car"] = sweep.theory_car[i];
    points.push_back(p);

    accumulate_run_stats(run, mux.raw, config.acquisition.bins);
    for (const auto& s : sweep.singles[i])
      accumulate_run_stats(run, s.raw, config.acquisition.bins);
  }
  run.metrics["points"] = points;
  run.files.push_back(dir / "car_vs_rate.csv");
}

void write_g2_vs_rate(const ExperimentConfig& config, RunResult& run,
                      const std::filesystem::path& dir) {
  std::ofstream csv(dir / "g2_vs_rate.csv");
  csv << "power_mw,mux_rate_khz,mux_g2,mux_g2_err,mux_triples,"
         "fs0_rate_khz,fs0_g2,fs0_g2_err,fs0_triples,"
         "oracle_mux_g2,oracle_fs0_g2\n";
  json points = json::array();
  const double bps = config.source.bins_per_second();
  MeasuredG2 histogram_run;
  double histogram_power = 0.0;

  for (std::size_t i = 0; i < config.sweep.powers_mw.size(); ++i) {
    const double power = config.sweep.powers_mw[i];
    const MeasuredPoint mux_rate =
        measure_rates(config, Measurement{true, 1, false}, power,
                      config.acquisition.bins, derive_seed(config.seed, i * 8));
    const MeasuredG2 mux_g2 =
        measure_g2(config, Measurement{true, 1, false}, power,
                   config.acquisition.bins, derive_seed(config.seed, i * 8 + 1));
    const MeasuredPoint single_rate =
        measure_rates(config, Measurement{false, 1, false}, power,
                      config.acquisition.bins, derive_seed(config.seed, i * 8 + 2));
    const MeasuredG2 single_g2 =
        measure_g2(config, Measurement{false, 1, false}, power,
                   config.acquisition.bins, derive_seed(config.seed, i * 8 + 3));

    Measurement mux_hbt{true, 1, true};
    Measurement single_hbt{false, 1, true};
    const double oracle_mux =
        analytic::g2_heralded_oracle(
            config::build_system_model(config, mux_hbt, power))
            .g2_zero;
    const double oracle_single =
        analytic::g2_heralded_oracle(
            config::build_system_model(config, single_hbt, power))
            .g2_zero;

    csv << fmt(power) << "," << fmt(mux_rate.rate_khz.value) << ","
        << fmt(mux_g2.g2_zero.value) << "," << fmt(mux_g2.g2_zero.error) << ","
        << mux_g2.triples << "," << fmt(single_rate.rate_khz.value) << ","
        << fmt(single_g2.g2_zero.value) << "," << fmt(single_g2.g2_zero.error)
        << "," << single_g2.triples << "," << fmt(oracle_mux) << ","
        << fmt(oracle_single) << "\n";

    json p;
    p["power_mw"] = power;
    p["mux_rate_khz"] = value_error(mux_rate.rate_khz);
    p["mux_g2"] = value_error(mux_g2.g2_zero);
    p["mux_g2_defined"] = mux_g2.g2_defined;
    p["fs0_rate_khz"] = value_error(single_rate.rate_khz);
    p["fs0_g2"] = value_error(single_g2.g2_zero);
    p["fs0_g2_defined"] = single_g2.g2_defined;
    p["oracle_mux_g2"] = oracle_mux;
    p["oracle_fs0_g2"] = oracle_single;
    points.push_back(p);

    accumulate_run_stats(run, mux_rate.raw, config.acquisition.bins);
    accumulate_run_stats(run, mux_g2.raw, config.acquisition.bins);
    accumulate_run_stats(run, single_rate.raw, config.acquisition.bins);
    accumulate_run_stats(run, single_g2.raw, config.acquisition.bins);
    if (power >= histogram_power) {
      histogram_power = power;
      histogram_run = mux_g2;
    }
  }

  // Full correlation histogram at the strongest operating point.
  std::ofstream tau_csv(dir / "g2_vs_rate_tau.csv");
  tau_csv << "delay_bins,g2,g2_err,undefined\n";
  for (const auto& point : histogram_run.curve)
    tau_csv << point.delay << "," << fmt(point.g2.value) << ","
            << fmt(point.g2.error) << "," << (point.undefined ? 1 : 0) << "\n";

  run.metrics["points"] = points;
  run.metrics["histogram_power_mw"] = histogram_power;
  run.files.push_back(dir / "g2_vs_rate.csv");
  run.files.push_back(dir / "g2_vs_rate_tau.csv");
  (void)bps;
}

void write_jsi_map(const ExperimentConfig& config, RunResult& run,
                   const std::filesystem::path& dir) {
  spectral::JsiSweepConfig sweep_config;
  sweep_config.grid = config.grid;
  sweep_config.pump_bandwidth_ghz = config.jsi.pump_bandwidth_ghz;
  sweep_config.step_ghz = config.jsi.step_ghz;
  sweep_config.idler_start_thz = config.jsi.idler_start_thz;
  sweep_config.idler_stop_thz = config.jsi.idler_stop_thz;
  sweep_config.signal_start_thz = config.jsi.signal_start_thz;
  sweep_config.signal_stop_thz = config.jsi.signal_stop_thz;
  sweep_config.heralding_loss_db = config.losses.narrowband_dwdm_db;
  sweep_config.heralding_loss_db[0] += config.losses.fi1_excess_db;

  std::vector<std::string> names = config.jsi.scenarios;
  if (names.empty()) names = {"unfiltered", "heralding_bank", "multiplexed"};

  json summary;
  for (const std::string& name : names) {
    const spectral::JsiScenario scenario = spectral::parse_jsi_scenario(name);
    const spectral::JsiGrid grid = spectral::jsi_sweep(sweep_config, scenario);
    const auto path = dir / ("jsi_map_" + name + ".csv");
    std::ofstream csv(path);
    grid.write_csv(csv);
    run.files.push_back(path);

    json entry;
    if (scenario == spectral::JsiScenario::unfiltered)
      entry["antidiagonal_fwhm_ghz"] =
          spectral::antidiagonal_fwhm_ghz(grid, config.grid.pair_sum_thz);
    const auto maxima = spectral::local_maxima(grid);
    json islands = json::array();
    for (const auto& [i, s] : maxima)
      islands.push_back({{"f_i_thz", grid.idler_axis_thz[i]},
                         {"f_s_thz", grid.signal_axis_thz[s]},
                         {"intensity", grid.at(i, s)}});
    entry["islands"] = islands;
    const auto marginal = grid.signal_marginal();
    std::size_t peak = 0;
    for (std::size_t k = 1; k < marginal.size(); ++k)
      if (marginal[k] > marginal[peak]) peak = k;
    entry["signal_marginal_peak_thz"] = grid.signal_axis_thz[peak];
    summary[name] = entry;
  }
  run.metrics["jsi"] = summary;
}

void write_hom_scan(const ExperimentConfig& config, RunResult& run,
                    const std::filesystem::path& dir) {
  Rng rng(derive_seed(config.seed, 0x484f4d));
  const hom::DipCurve curve = hom_dip_scan(config.hom, rng);
  std::ofstream csv(dir / "hom_scan.csv");
  curve.write_csv(csv);
  run.files.push_back(dir / "hom_scan.csv");

  json fit;
  fit["two_fold_visibility"] = {{"value", curve.two_fold_fit.visibility},
                                {"error", curve.two_fold_fit.visibility_std}};
  fit["three_fold_visibility"] = {{"value", curve.three_fold_fit.visibility},
                                  {"error", curve.three_fold_fit.visibility_std}};
  fit["two_fold_expected"] = curve.two_fold_expected;
  fit["three_fold_expected"] = curve.three_fold_expected;
  fit["two_fold_bound"] =
      hom::visibility_two_fold(config.hom.n_bar_1, config.hom.n_bar_2);
  fit["three_fold_bound"] =
      hom::visibility_three_fold(config.hom.n_bar_1, config.hom.n_bar_2);
  fit["corrected_three_fold_bound"] = hom::corrected_three_fold_bound(
      config.hom.n_bar_1, config.hom.n_bar_2, config.hom.bandwidth_factor);
  fit["bandwidth_overlap_computed"] = hom::bandwidth_correction(
      config.hom.pump_bandwidth_ghz, config.hom.herald_bandwidth_ghz,
      config.hom.output_filter_bandwidth_ghz);
  fit["purity_factor"] = config.hom.purity_factor;
  fit["three_fold_purity_uncorrected"] =
      curve.three_fold_fit.visibility * config.hom.purity_factor;
  fit["single_photon_replacement"] = hom::single_photon_replacement_visibility(
      config.hom.g2_arm1, config.hom.bandwidth_factor);
  run.metrics["hom"] = fit;
}

void write_loss_budget(const ExperimentConfig& config, RunResult& run,
                       const std::filesystem::path& dir) {
  const config::LossTable& l = config.losses;
  std::ofstream csv(dir / "loss_budget.csv");
  csv << "arm,component,loss_db\n";
  csv << "signal,ppln_coupling," << fmt(l.ppln_coupling_db) << "\n";
  csv << "signal,dwdm," << fmt(l.dwdm_signal_db) << "\n";
  csv << "signal,delay_fiber," << fmt(l.delay_fiber_db) << "\n";
  csv << "signal,eom," << fmt(l.eom_db) << "\n";
  csv << "signal,tnf," << fmt(l.tnf_db) << "\n";
  csv << "signal,snspd," << fmt(transmission_to_db(config.detector("signal").efficiency)) << "\n";
  static const char* herald_labels[3] = {"f_i1", "f_i2", "f_i3"};
  for (std::size_t mode = 0; mode < 3; ++mode) {
    const std::string arm = std::string("heralding_") + herald_labels[mode];
    csv << arm << ",ppln_coupling," << fmt(l.ppln_coupling_db) << "\n";
    csv << arm << ",dwdm," << fmt(l.dwdm_heralding_db) << "\n";
    csv << arm << ",narrowband_dwdm," << fmt(l.narrowband_dwdm_db[mode]) << "\n";
    csv << arm << ",snspd,"
        << fmt(transmission_to_db(config.detector(herald_labels[mode]).efficiency))
        << "\n";
  }
  run.files.push_back(dir / "loss_budget.csv");

  json budget;
  const double signal_transmission =
      db_to_transmission(l.signal_chain_db()) *
      config.detector("signal").efficiency;
  budget["signal_transmission"] = signal_transmission;
  const double bandwidth_ratio =
      config.grid.channel_fwhm_ghz / config.grid.output_filter_fwhm_ghz;
  budget["herald_to_signal_bandwidth_ratio"] = bandwidth_ratio;
  json herald_arms;
  for (std::size_t mode = 0; mode < 3; ++mode) {
    const double transmission =
        db_to_transmission(l.heralding_chain_db(mode, false)) *
        config.detector(herald_labels[mode]).efficiency;
    herald_arms[herald_labels[mode]] = {
        {"transmission", transmission},
        {"expected_collection", transmission * bandwidth_ratio}};
  }
  budget["heralding_transmission"] = herald_arms;

  // Klyshko collection efficiencies from short single-mode runs.
  const double power = config.sweep.powers_mw.back();
  json collection;
  for (std::size_t mode = 0; mode < 3; ++mode) {
    const MeasuredPoint p =
        measure_rates(config, Measurement{false, mode, false}, power,
                      config.acquisition.bins, derive_seed(config.seed, 40 + mode));
    const engine::Tallies& t = p.raw.tallies;
    json entry;
    entry["signal_arm_collection"] =
        t.herald_singles > 0
            ? detection::klyshko_efficiency(t.coincidences, t.herald_singles)
            : 0.0;
    entry["heralding_arm_collection"] =
        t.signal_singles > 0
            ? detection::klyshko_efficiency(t.coincidences_per_mode[mode],
                                            t.signal_singles)
            : 0.0;
    collection[herald_labels[mode]] = entry;
    accumulate_run_stats(run, p.raw, config.acquisition.bins);
  }
  budget["klyshko"] = collection;
  run.metrics["loss_budget"] = budget;
}

}  // namespace

RunResult run_scenario(const ExperimentConfig& config,
                       const std::filesystem::path& out_root) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();

  RunResult run;
  run.run_id = config.run_id;
  run.scenario = config::to_string(config.scenario);
  const std::filesystem::path dir = out_root / config.run_id;
  std::filesystem::create_directories(dir);

  run.metrics["run_id"] = config.run_id;
  run.metrics["scenario"] = run.scenario;
  run.metrics["seed"] = config.seed;

  switch (config.scenario) {
    case config::Scenario::rate_vs_power:
      write_rate_vs_power(config, run, dir);
      break;
    case config::Scenario::car_vs_rate:
      write_car_vs_rate(config, run, dir);
      break;
    case config::Scenario::g2_vs_rate:
      write_g2_vs_rate(config, run, dir);
      break;
    case config::Scenario::jsi_map:
      write_jsi_map(config, run, dir);
      break;
    case config::Scenario::hom_scan:
      write_hom_scan(config, run, dir);
      break;
    case config::Scenario::loss_budget:
      write_loss_budget(config, run, dir);
      break;
  }

  run.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  run.bins_per_second = run.wall_seconds > 0.0
                            ? static_cast<double>(run.total_bins) / run.wall_seconds
                            : 0.0;
  run.metrics["wall_clock_s"] = run.wall_seconds;
  run.metrics["bins_total"] = run.total_bins;
  run.metrics["bins_per_second"] = run.bins_per_second;

  {
    std::ofstream metrics(dir / "metrics.json");
    metrics << run.metrics.dump(2) << "\n";
    run.files.push_back(dir / "metrics.json");
  }
  {
    std::ofstream echo(dir / "config.echo");
    echo << config::to_json_string(config);
    run.files.push_back(dir / "config.echo");
  }
  return run;
}

}  // namespace specmux::experiment
