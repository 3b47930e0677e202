#include "specmux/analytic.hpp"

#include <cmath>
#include <stdexcept>

#include "specmux/source.hpp"

namespace specmux::analytic {

namespace {

using model::SystemModel;

// Silence-mask bits. In the direct measurement only kNoFirst is meaningful
// for the signal side; in HBT mode kNoFirst / kNoSecond are branches A / B.
enum : int { kNoHerald = 1, kNoFirst = 2, kNoSecond = 4 };

// Ramp branches of a side mode: no idler click, click with the ramp landing,
// click with the ramp lost.
enum class Branch { no_click, ramp_ok, ramp_fail };

/// Per-photon probability that a pair photon at `position` evades every
/// detector demanded silent by `mask`. Photons route exclusively, so the
/// evasion probabilities subtract.
double pair_silence(const SystemModel& m, bool hbt, int mask, int position) {
  double hit = 0.0;
  if (hbt) {
    if (mask & kNoFirst) hit += m.hbt_qa(position);
    if (mask & kNoSecond) hit += m.hbt_qb(position);
  } else if (mask & kNoFirst) {
    hit = m.signal_q(position);
  }
  return 1.0 - hit;
}

double background_silence(const SystemModel& m, bool hbt, int mask,
                          int position) {
  double hit = 0.0;
  if (hbt) {
    if (mask & kNoFirst) hit += m.background_qa(position);
    if (mask & kNoSecond) hit += m.background_qb(position);
  } else if (mask & kNoFirst) {
    hit = m.background_q(position);
  }
  return 1.0 - hit;
}

/// E over the thermal photon number of one side mode of
/// branch_weight(n) x silence^n. The branch weights fold the heralding-dark
/// probability in, since a dark click fires the ramp just like a photon.
double side_mode_expectation(const SystemModel& m, std::size_t mode,
                             Branch branch, double silence, int n_max) {
  const double eta = m.herald_eta[mode];
  const double ramp_p = m.multiplexing ? m.shift_success : 0.0;
  const auto dist = source::photon_number_distribution(m.mu[mode], n_max);
  double expect = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    const double quiet = std::pow(1.0 - eta, n) * (1.0 - m.dark_prob_herald);
    double weight = 0.0;
    switch (branch) {
      case Branch::no_click: weight = quiet; break;
      case Branch::ramp_ok: weight = (1.0 - quiet) * ramp_p; break;
      case Branch::ramp_fail: weight = (1.0 - quiet) * (1.0 - ramp_p); break;
    }
    expect += dist.probabilities[n] * weight * std::pow(silence, n);
  }
  return expect;
}

/// E over the central mode of (optional herald silence) x silence^n.
double center_mode_expectation(const SystemModel& m, bool demand_herald_quiet,
                               double silence, int n_max) {
  const double eta = m.herald_eta[1];
  const auto dist = source::photon_number_distribution(m.mu[1], n_max);
  double expect = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    double weight = 1.0;
    if (demand_herald_quiet)
      weight = std::pow(1.0 - eta, n) * (1.0 - m.dark_prob_herald);
    expect += dist.probabilities[n] * weight * std::pow(silence, n);
  }
  return expect;
}

/// Thermal E[x^n] in closed form (untwinned backgrounds carry no herald).
double thermal_pgf(double mu, double x) { return 1.0 / (1.0 + mu * (1.0 - x)); }

/// P(every detector in `mask` silent in one bin), by enumerating the two
/// side-mode ramp branches (which set the common-mode displacement of the
/// whole bin) and the photon numbers of each source.
double silent_probability(const SystemModel& m, bool hbt, int mask,
                          int n_max) {
  static const Branch kBranches[3] = {Branch::no_click, Branch::ramp_ok,
                                      Branch::ramp_fail};
  const bool demand_herald = mask & kNoHerald;
  double total = 0.0;
  for (Branch b0 : kBranches) {
    if (demand_herald && m.herald_select[0] && b0 != Branch::no_click) continue;
    for (Branch b2 : kBranches) {
      if (demand_herald && m.herald_select[2] && b2 != Branch::no_click)
        continue;
      const int net = SystemModel::net_displacement(b0 == Branch::ramp_ok,
                                                    b2 == Branch::ramp_ok);
      double term = 1.0;
      term *= side_mode_expectation(m, 0, b0,
                                    pair_silence(m, hbt, mask, 0 + net), n_max);
      term *= side_mode_expectation(m, 2, b2,
                                    pair_silence(m, hbt, mask, 2 + net), n_max);
      term *= center_mode_expectation(m, demand_herald && m.herald_select[1],
                                      pair_silence(m, hbt, mask, 1 + net),
                                      n_max);
      if (m.background_ratio > 0.0) {
        for (int mode = 0; mode < 3; ++mode)
          term *= thermal_pgf(
              m.background_ratio * m.mu[mode],
              background_silence(m, hbt, mask, mode + net));
      }
      total += term;
    }
  }
  if (mask & kNoFirst) total *= 1.0 - m.dark_prob_signal;
  if (hbt && (mask & kNoSecond)) total *= 1.0 - m.dark_prob_signal;
  return total;
}

constexpr int kRateEnumeration = 64;

}  // namespace

double herald_click_probability(double mu, double eta) {
  if (mu < 0.0 || eta < 0.0 || eta > 1.0)
    throw std::invalid_argument("herald_click_probability: bad arguments");
  return 1.0 - thermal_pgf(mu, 1.0 - eta);
}

double herald_probability(const model::SystemModel& m) {
  return 1.0 - silent_probability(m, false, kNoHerald, kRateEnumeration);
}

double signal_probability(const model::SystemModel& m) {
  return 1.0 - silent_probability(m, false, kNoFirst, kRateEnumeration);
}

double coincidence_probability(const model::SystemModel& m) {
  const double s_h = silent_probability(m, false, kNoHerald, kRateEnumeration);
  const double s_s = silent_probability(m, false, kNoFirst, kRateEnumeration);
  const double s_hs =
      silent_probability(m, false, kNoHerald | kNoFirst, kRateEnumeration);
  return 1.0 - s_h - s_s + s_hs;
}

double side_mode_rate_khz(const model::SystemModel& m, double bins_per_second) {
  double rate = 0.0;
  for (std::size_t mode = 0; mode < 3; ++mode) {
    if (mode == model::SystemModel::tnf_center_mode()) continue;
    double p = herald_click_probability(m.mu[mode], m.herald_eta[mode]);
    p = 1.0 - (1.0 - p) * (1.0 - m.dark_prob_herald);
    rate += p * bins_per_second;
  }
  return rate / 1e3;
}

double hsp_rate_khz(const model::SystemModel& m, double bins_per_second) {
  return coincidence_probability(m) * bins_per_second / 1e3;
}

double car(const model::SystemModel& m) {
  const double accidental = herald_probability(m) * signal_probability(m);
  if (accidental <= 0.0)
    throw std::invalid_argument("car: accidental probability is zero");
  return coincidence_probability(m) / accidental;
}

G2OracleResult g2_heralded_oracle(const model::SystemModel& m, int n_max) {
  if (n_max < 1) throw std::invalid_argument("oracle: n_max must be >= 1");
  auto silent = [&](int mask) {
    return silent_probability(m, true, mask, n_max);
  };
  const double s_h = silent(kNoHerald);
  const double s_a = silent(kNoFirst);
  const double s_b = silent(kNoSecond);
  const double s_ha = silent(kNoHerald | kNoFirst);
  const double s_hb = silent(kNoHerald | kNoSecond);
  const double s_ab = silent(kNoFirst | kNoSecond);
  const double s_hab = silent(kNoHerald | kNoFirst | kNoSecond);

  const double p_h = 1.0 - s_h;
  const double p_ah = 1.0 - s_h - s_a + s_ha;
  const double p_bh = 1.0 - s_h - s_b + s_hb;
  const double p_abh = 1.0 - s_h - s_a - s_b + s_ha + s_hb + s_ab - s_hab;

  if (p_h <= 0.0 || p_ah <= 0.0 || p_bh <= 0.0)
    throw std::invalid_argument("oracle: degenerate configuration");

  G2OracleResult result;
  result.herald_probability = p_h;
  result.triple_probability = p_abh;
  result.g2_zero = p_abh * p_h / (p_ah * p_bh);
  return result;
}

double enhancement_factor(const model::SystemModel& mux,
                          const std::array<model::SystemModel, 3>& singles,
                          double bins_per_second) {
  const double mux_rate = hsp_rate_khz(mux, bins_per_second);
  double mean_single = 0.0;
  for (const auto& s : singles) mean_single += hsp_rate_khz(s, bins_per_second);
  mean_single /= 3.0;
  if (mean_single <= 0.0)
    throw std::invalid_argument("enhancement: single-mode rates are zero");
  return mux_rate / mean_single;
}

}  // namespace specmux::analytic
