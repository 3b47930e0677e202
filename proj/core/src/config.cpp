#include "specmux/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "specmux/analytic.hpp"
#include "specmux/units.hpp"

namespace specmux::config {

using nlohmann::json;

void LossTable::validate() const {
  const double values[] = {ppln_coupling_db,   dwdm_signal_db,
                           dwdm_heralding_db,  narrowband_dwdm_db[0],
                           narrowband_dwdm_db[1], narrowband_dwdm_db[2],
                           delay_fiber_db,     eom_db,
                           tnf_db,             fi1_excess_db};
  for (double v : values)
    if (v < 0.0) throw std::invalid_argument("losses: dB values must be >= 0");
}

double LossTable::signal_chain_db() const {
  return ppln_coupling_db + dwdm_signal_db + delay_fiber_db + eom_db + tnf_db;
}

double LossTable::heralding_chain_db(std::size_t mode, bool with_excess) const {
  double chain = ppln_coupling_db + dwdm_heralding_db + narrowband_dwdm_db[mode];
  if (with_excess && mode == 0) chain += fi1_excess_db;
  return chain;
}

void AcquisitionConfig::validate() const {
  if (bins == 0) throw std::invalid_argument("acquisition: bins must be > 0");
  if (batch_bins == 0)
    throw std::invalid_argument("acquisition: batch_bins must be > 0");
  if (coincidence_window < 1)
    throw std::invalid_argument("acquisition: window must be >= 1 bin");
  if (g2_max_delay < 1)
    throw std::invalid_argument("acquisition: g2_max_delay must be >= 1");
  if (accidental_start < 1 || accidental_step < 1 || accidental_count < 2)
    throw std::invalid_argument("acquisition: bad accidental comb");
}

std::vector<std::int64_t> AcquisitionConfig::accidental_offsets() const {
  std::vector<std::int64_t> offsets;
  for (int k = 0; k < accidental_count / 2; ++k) {
    offsets.push_back(accidental_start + k * accidental_step);
    offsets.push_back(-(accidental_start + k * accidental_step));
  }
  return offsets;
}

Scenario parse_scenario(const std::string& name) {
  if (name == "rate_vs_power") return Scenario::rate_vs_power;
  if (name == "car_vs_rate") return Scenario::car_vs_rate;
  if (name == "g2_vs_rate") return Scenario::g2_vs_rate;
  if (name == "jsi_map") return Scenario::jsi_map;
  if (name == "hom_scan") return Scenario::hom_scan;
  if (name == "loss_budget") return Scenario::loss_budget;
  throw std::invalid_argument("unknown scenario: " + name);
}

std::string to_string(Scenario scenario) {
  switch (scenario) {
    case Scenario::rate_vs_power: return "rate_vs_power";
    case Scenario::car_vs_rate: return "car_vs_rate";
    case Scenario::g2_vs_rate: return "g2_vs_rate";
    case Scenario::jsi_map: return "jsi_map";
    case Scenario::hom_scan: return "hom_scan";
    case Scenario::loss_budget: return "loss_budget";
  }
  throw std::invalid_argument("unknown scenario value");
}

void ExperimentConfig::validate() const {
  source.validate();
  feedforward.validate();
  grid.validate();
  losses.validate();
  acquisition.validate();
  hom.validate();
  if (detectors.size() != 6)
    throw std::invalid_argument(
        "config: expected 6 detectors (f_i1, f_i2, f_i3, signal, hbt_a, hbt_b)");
  for (const auto& d : detectors) d.validate();
  if (sweep.powers_mw.empty())
    throw std::invalid_argument("config: sweep must contain at least one power");
}

const detection::DetectorConfig& ExperimentConfig::detector(
    const std::string& label) const {
  for (const auto& d : detectors)
    if (d.label == label) return d;
  throw std::invalid_argument("config: no detector labeled " + label);
}

model::SystemModel build_system_model(const ExperimentConfig& config,
                                      const Measurement& measurement,
                                      double pump_power_mw) {
  config.validate();
  model::SystemModel m;
  source::SourceConfig src = config.source;
  src.pump_power_mw = pump_power_mw;
  const double mu = source::mean_pairs_per_bin(src, 0);
  m.mu = {mu, mu, mu};

  static const char* herald_labels[3] = {"f_i1", "f_i2", "f_i3"};
  for (std::size_t mode = 0; mode < 3; ++mode) {
    const double chain_db = config.losses.heralding_chain_db(mode, true);
    m.herald_eta[mode] = db_to_transmission(chain_db) *
                         config.detector(herald_labels[mode]).efficiency;
  }
  m.signal_path = db_to_transmission(config.losses.signal_chain_db());
  m.det_signal = config.detector("signal").efficiency;
  m.det_a = config.detector("hbt_a").efficiency;
  m.det_b = config.detector("hbt_b").efficiency;

  m.channel_fwhm_ghz = config.grid.channel_fwhm_ghz;
  m.channel_spacing_ghz = config.grid.channel_spacing_ghz;
  m.output_filter_fwhm_ghz = config.grid.output_filter_fwhm_ghz;
  m.background_ratio =
      config.grid.output_filter_fwhm_ghz / config.grid.channel_fwhm_ghz - 1.0;

  m.multiplexing = measurement.multiplexed;
  m.tnf_position = measurement.multiplexed
                       ? model::SystemModel::tnf_center_mode()
                       : measurement.single_mode;
  if (measurement.multiplexed) {
    m.herald_select = {true, true, true};
  } else {
    m.herald_select = {false, false, false};
    m.herald_select[measurement.single_mode] = true;
  }
  m.hbt = measurement.hbt;

  const double bin_seconds = 1.0 / config.source.bins_per_second();
  m.dark_prob_herald =
      config.detector("f_i2").dark_count_rate_hz * bin_seconds;
  m.dark_prob_signal =
      config.detector("signal").dark_count_rate_hz * bin_seconds;

  m.shift_success = 1.0;
  if (measurement.multiplexed) {
    const double side_khz =
        analytic::side_mode_rate_khz(m, config.source.bins_per_second());
    m.shift_success =
        config.feedforward.shift_efficiency *
        feedforward::trigger_survival_probability(side_khz, config.feedforward);
  }
  m.finalize();
  return m;
}

namespace {

std::vector<detection::DetectorConfig> default_detectors() {
  const double herald_eff = db_to_transmission(1.80);  // SNSPD insertion, dB
  const double signal_eff = db_to_transmission(2.20);
  // 100 Hz dark rate is a typical SNSPD scale, not a reported value.
  const double dark_hz = 100.0;
  return {
      {herald_eff, dark_hz, "f_i1"}, {herald_eff, dark_hz, "f_i2"},
      {herald_eff, dark_hz, "f_i3"}, {signal_eff, dark_hz, "signal"},
      {signal_eff, dark_hz, "hbt_a"}, {signal_eff, dark_hz, "hbt_b"},
  };
}

}  // namespace

ExperimentConfig paper2021_preset() {
  ExperimentConfig config;
  config.run_id = "paper2021";
  config.seed = 20210417;
  config.grid = spectral::default_mode_grid();
  config.detectors = default_detectors();
  config.source.mode_count = 3;
  config.source.gain_coefficient = 1e-6;  // replaced by calibration below
  config.source.gain_coefficient = calibrate_gain(config, 16.98, 23.6);
  return config;
}

ExperimentConfig ideal_preset() {
  ExperimentConfig config;
  config.run_id = "ideal";
  config.seed = 7;
  config.grid = spectral::default_mode_grid();
  config.losses = LossTable{0, 0, 0, {0, 0, 0}, 0, 0, 0, 0};
  config.detectors = default_detectors();
  for (auto& d : config.detectors) {
    d.efficiency = 1.0;
    d.dark_count_rate_hz = 0.0;
  }
  config.feedforward.shift_efficiency = 1.0;
  config.feedforward.survival_enabled = false;
  config.source.gain_coefficient = 1e-5;
  return config;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"paper2021", "ideal"};
  return names;
}

ExperimentConfig preset(const std::string& name) {
  if (name == "paper2021") return paper2021_preset();
  if (name == "ideal") return ideal_preset();
  throw std::invalid_argument("unknown preset: " + name);
}

double calibrate_gain(const ExperimentConfig& config, double power_mw,
                      double target_khz) {
  ExperimentConfig trial = config;
  auto rate_for = [&](double gain) {
    trial.source.gain_coefficient = gain;
    const model::SystemModel m =
        build_system_model(trial, Measurement{true, 1, false}, power_mw);
    return analytic::hsp_rate_khz(m, trial.source.bins_per_second());
  };
  double lo = 1e-12, hi = 1e-1;
  if (rate_for(lo) > target_khz || rate_for(hi) < target_khz)
    throw std::invalid_argument("calibrate_gain: target outside bracket");
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = std::sqrt(lo * hi);
    if (rate_for(mid) < target_khz)
      lo = mid;
    else
      hi = mid;
  }
  return std::sqrt(lo * hi);
}

// ---------------------------------------------------------------------------
// JSON serialization

namespace {

json to_json(const source::SourceConfig& s) {
  return {{"pump_power_mw", s.pump_power_mw},
          {"pump_mode", s.pump_mode == source::PumpMode::cw_binned ? "cw_binned"
                                                                   : "pulsed"},
          {"bin_width_ns", s.bin_width_ns},
          {"rep_rate_mhz", s.rep_rate_mhz},
          {"pulse_fwhm_ps", s.pulse_fwhm_ps},
          {"peak_power_mw", s.peak_power_mw},
          {"gain_coefficient", s.gain_coefficient},
          {"power_exponent", s.power_exponent},
          {"mode_count", s.mode_count}};
}

void from_json_source(const json& j, source::SourceConfig& s) {
  j.at("pump_power_mw").get_to(s.pump_power_mw);
  const std::string mode = j.at("pump_mode").get<std::string>();
  if (mode == "cw_binned")
    s.pump_mode = source::PumpMode::cw_binned;
  else if (mode == "pulsed")
    s.pump_mode = source::PumpMode::pulsed;
  else
    throw std::invalid_argument("config: unknown pump mode " + mode);
  j.at("bin_width_ns").get_to(s.bin_width_ns);
  j.at("rep_rate_mhz").get_to(s.rep_rate_mhz);
  j.at("pulse_fwhm_ps").get_to(s.pulse_fwhm_ps);
  j.at("peak_power_mw").get_to(s.peak_power_mw);
  j.at("gain_coefficient").get_to(s.gain_coefficient);
  j.at("power_exponent").get_to(s.power_exponent);
  j.at("mode_count").get_to(s.mode_count);
}

json to_json(const feedforward::FeedForwardConfig& f) {
  return {{"v_pi_volts", f.v_pi_volts},
          {"ramp_up_vps", f.ramp_up_vps},
          {"ramp_down_vps", f.ramp_down_vps},
          {"shift_efficiency", f.shift_efficiency},
          {"survival_enabled", f.survival_enabled},
          {"awg_f3db_mhz", f.awg_f3db_mhz},
          {"butterworth_order", f.butterworth_order},
          {"compensation_delay_ns", f.compensation_delay_ns}};
}

void from_json_feedforward(const json& j, feedforward::FeedForwardConfig& f) {
  j.at("v_pi_volts").get_to(f.v_pi_volts);
  j.at("ramp_up_vps").get_to(f.ramp_up_vps);
  j.at("ramp_down_vps").get_to(f.ramp_down_vps);
  j.at("shift_efficiency").get_to(f.shift_efficiency);
  j.at("survival_enabled").get_to(f.survival_enabled);
  j.at("awg_f3db_mhz").get_to(f.awg_f3db_mhz);
  j.at("butterworth_order").get_to(f.butterworth_order);
  j.at("compensation_delay_ns").get_to(f.compensation_delay_ns);
}

json to_json(const spectral::ModeGrid& g) {
  return {{"idler_centers_thz", g.idler_centers_thz},
          {"signal_centers_thz", g.signal_centers_thz},
          {"channel_fwhm_ghz", g.channel_fwhm_ghz},
          {"channel_spacing_ghz", g.channel_spacing_ghz},
          {"output_filter_fwhm_ghz", g.output_filter_fwhm_ghz},
          {"pair_sum_thz", g.pair_sum_thz}};
}

void from_json_grid(const json& j, spectral::ModeGrid& g) {
  j.at("idler_centers_thz").get_to(g.idler_centers_thz);
  j.at("signal_centers_thz").get_to(g.signal_centers_thz);
  j.at("channel_fwhm_ghz").get_to(g.channel_fwhm_ghz);
  j.at("channel_spacing_ghz").get_to(g.channel_spacing_ghz);
  j.at("output_filter_fwhm_ghz").get_to(g.output_filter_fwhm_ghz);
  j.at("pair_sum_thz").get_to(g.pair_sum_thz);
}

json to_json(const LossTable& l) {
  return {{"ppln_coupling_db", l.ppln_coupling_db},
          {"dwdm_signal_db", l.dwdm_signal_db},
          {"dwdm_heralding_db", l.dwdm_heralding_db},
          {"narrowband_dwdm_db", l.narrowband_dwdm_db},
          {"delay_fiber_db", l.delay_fiber_db},
          {"eom_db", l.eom_db},
          {"tnf_db", l.tnf_db},
          {"fi1_excess_db", l.fi1_excess_db}};
}

void from_json_losses(const json& j, LossTable& l) {
  j.at("ppln_coupling_db").get_to(l.ppln_coupling_db);
  j.at("dwdm_signal_db").get_to(l.dwdm_signal_db);
  j.at("dwdm_heralding_db").get_to(l.dwdm_heralding_db);
  j.at("narrowband_dwdm_db").get_to(l.narrowband_dwdm_db);
  j.at("delay_fiber_db").get_to(l.delay_fiber_db);
  j.at("eom_db").get_to(l.eom_db);
  j.at("tnf_db").get_to(l.tnf_db);
  j.at("fi1_excess_db").get_to(l.fi1_excess_db);
}

json to_json(const detection::DetectorConfig& d) {
  return {{"label", d.label},
          {"efficiency", d.efficiency},
          {"dark_count_rate_hz", d.dark_count_rate_hz}};
}

json to_json(const AcquisitionConfig& a) {
  return {{"bins", a.bins},
          {"batch_bins", a.batch_bins},
          {"coincidence_window", a.coincidence_window},
          {"g2_max_delay", a.g2_max_delay},
          {"accidental_start", a.accidental_start},
          {"accidental_step", a.accidental_step},
          {"accidental_count", a.accidental_count}};
}

void from_json_acquisition(const json& j, AcquisitionConfig& a) {
  j.at("bins").get_to(a.bins);
  j.at("batch_bins").get_to(a.batch_bins);
  j.at("coincidence_window").get_to(a.coincidence_window);
  j.at("g2_max_delay").get_to(a.g2_max_delay);
  j.at("accidental_start").get_to(a.accidental_start);
  j.at("accidental_step").get_to(a.accidental_step);
  j.at("accidental_count").get_to(a.accidental_count);
}

json to_json(const JsiConfig& c) {
  return {{"pump_bandwidth_ghz", c.pump_bandwidth_ghz},
          {"step_ghz", c.step_ghz},
          {"idler_start_thz", c.idler_start_thz},
          {"idler_stop_thz", c.idler_stop_thz},
          {"signal_start_thz", c.signal_start_thz},
          {"signal_stop_thz", c.signal_stop_thz},
          {"scenarios", c.scenarios}};
}

void from_json_jsi(const json& j, JsiConfig& c) {
  j.at("pump_bandwidth_ghz").get_to(c.pump_bandwidth_ghz);
  j.at("step_ghz").get_to(c.step_ghz);
  j.at("idler_start_thz").get_to(c.idler_start_thz);
  j.at("idler_stop_thz").get_to(c.idler_stop_thz);
  j.at("signal_start_thz").get_to(c.signal_start_thz);
  j.at("signal_stop_thz").get_to(c.signal_stop_thz);
  j.at("scenarios").get_to(c.scenarios);
}

json to_json(const hom::HomConfig& h) {
  return {{"n_bar_1", h.n_bar_1},
          {"n_bar_2", h.n_bar_2},
          {"g2_arm1", h.g2_arm1},
          {"g2_arm1_thermal", h.g2_arm1_thermal},
          {"g2_arm2", h.g2_arm2},
          {"pump_bandwidth_ghz", h.pump_bandwidth_ghz},
          {"herald_bandwidth_ghz", h.herald_bandwidth_ghz},
          {"output_filter_bandwidth_ghz", h.output_filter_bandwidth_ghz},
          {"bandwidth_factor", h.bandwidth_factor},
          {"purity_factor", h.purity_factor},
          {"delay_start_ps", h.delay_start_ps},
          {"delay_stop_ps", h.delay_stop_ps},
          {"delay_step_ps", h.delay_step_ps},
          {"two_fold_wing_counts", h.two_fold_wing_counts},
          {"three_fold_wing_counts", h.three_fold_wing_counts},
          {"fit_resamples", h.fit_resamples},
          {"noise_enabled", h.noise_enabled}};
}

void from_json_hom(const json& j, hom::HomConfig& h) {
  j.at("n_bar_1").get_to(h.n_bar_1);
  j.at("n_bar_2").get_to(h.n_bar_2);
  j.at("g2_arm1").get_to(h.g2_arm1);
  j.at("g2_arm1_thermal").get_to(h.g2_arm1_thermal);
  j.at("g2_arm2").get_to(h.g2_arm2);
  j.at("pump_bandwidth_ghz").get_to(h.pump_bandwidth_ghz);
  j.at("herald_bandwidth_ghz").get_to(h.herald_bandwidth_ghz);
  j.at("output_filter_bandwidth_ghz").get_to(h.output_filter_bandwidth_ghz);
  j.at("bandwidth_factor").get_to(h.bandwidth_factor);
  j.at("purity_factor").get_to(h.purity_factor);
  j.at("delay_start_ps").get_to(h.delay_start_ps);
  j.at("delay_stop_ps").get_to(h.delay_stop_ps);
  j.at("delay_step_ps").get_to(h.delay_step_ps);
  j.at("two_fold_wing_counts").get_to(h.two_fold_wing_counts);
  j.at("three_fold_wing_counts").get_to(h.three_fold_wing_counts);
  j.at("fit_resamples").get_to(h.fit_resamples);
  j.at("noise_enabled").get_to(h.noise_enabled);
}

}  // namespace

std::string to_json_string(const ExperimentConfig& c) {
  json j;
  j["run_id"] = c.run_id;
  j["seed"] = c.seed;
  j["scenario"] = to_string(c.scenario);
  j["source"] = to_json(c.source);
  j["feedforward"] = to_json(c.feedforward);
  j["grid"] = to_json(c.grid);
  j["losses"] = to_json(c.losses);
  json detectors = json::array();
  for (const auto& d : c.detectors) detectors.push_back(to_json(d));
  j["detectors"] = detectors;
  j["acquisition"] = to_json(c.acquisition);
  j["sweep"] = {{"powers_mw", c.sweep.powers_mw},
                {"low_power_threshold_mw", c.sweep.low_power_threshold_mw}};
  j["jsi"] = to_json(c.jsi);
  j["hom"] = to_json(c.hom);
  j["threads"] = c.threads;
  return j.dump(2) + "\n";
}

ExperimentConfig from_json_string(const std::string& text) {
  const json j = json::parse(text);
  ExperimentConfig c;
  j.at("run_id").get_to(c.run_id);
  j.at("seed").get_to(c.seed);
  c.scenario = parse_scenario(j.at("scenario").get<std::string>());
  from_json_source(j.at("source"), c.source);
  from_json_feedforward(j.at("feedforward"), c.feedforward);
  from_json_grid(j.at("grid"), c.grid);
  from_json_losses(j.at("losses"), c.losses);
  c.detectors.clear();
  for (const auto& dj : j.at("detectors")) {
    detection::DetectorConfig d;
    dj.at("label").get_to(d.label);
    dj.at("efficiency").get_to(d.efficiency);
    dj.at("dark_count_rate_hz").get_to(d.dark_count_rate_hz);
    c.detectors.push_back(d);
  }
  from_json_acquisition(j.at("acquisition"), c.acquisition);
  j.at("sweep").at("powers_mw").get_to(c.sweep.powers_mw);
  j.at("sweep").at("low_power_threshold_mw").get_to(c.sweep.low_power_threshold_mw);
  from_json_jsi(j.at("jsi"), c.jsi);
  from_json_hom(j.at("hom"), c.hom);
  j.at("threads").get_to(c.threads);
  c.validate();
  return c;
}

ExperimentConfig load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_json_string(buffer.str());
}

void save_file(const ExperimentConfig& config, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write config file: " + path);
  out << to_json_string(config);
}

}  // namespace specmux::config
