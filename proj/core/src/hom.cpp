#include "specmux/hom.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "specmux/units.hpp"

namespace specmux::hom {

namespace {

/// Interference-factor 1/e time for Gaussian wave packets whose spectral
/// intensity FWHM is df: i12(dt) = exp(-(dt/tau_c)^2) with
/// tau_c = sqrt(2 ln 2) / (pi df).
double coherence_time_ps(double df_ghz) {
  return std::sqrt(2.0 * M_LN2) / (M_PI * df_ghz) * 1e3;
}

/// External spectral width of the heralded photon after the output filter.
double filtered_source_width_ghz(const HomConfig& c) {
  const double doubled_pump = std::sqrt(2.0) * c.pump_bandwidth_ghz;
  const double external = convolved_fwhm(doubled_pump, c.herald_bandwidth_ghz);
  return filtered_fwhm(external, c.output_filter_bandwidth_ghz);
}

struct FitParams {
  double wing, visibility, center, width;
};

/// Weighted Gauss-Newton fit (Levenberg damped) of
/// c(t) = wing (1 - v exp(-((t - t0)/w)^2)).
bool fit_gaussian_dip(const std::vector<double>& t,
                      const std::vector<double>& counts, FitParams& p) {
  const std::size_t n = t.size();
  double lambda = 1e-3;
  double prev_chi2 = 1e300;
  for (int iter = 0; iter < 200; ++iter) {
    double jtj[4][4] = {};
    double jtr[4] = {};
    double chi2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double z = (t[i] - p.center) / p.width;
      const double e = std::exp(-z * z);
      const double modeled = p.wing * (1.0 - p.visibility * e);
      const double sigma = std::sqrt(std::max(counts[i], 1.0));
      const double r = (counts[i] - modeled) / sigma;
      chi2 += r * r;
      const double j[4] = {
          (1.0 - p.visibility * e) / sigma,
          -p.wing * e / sigma,
          -p.wing * p.visibility * e * 2.0 * z / p.width / sigma,
          -p.wing * p.visibility * e * 2.0 * z * z / p.width / sigma,
      };
      for (int a = 0; a < 4; ++a) {
        jtr[a] += j[a] * r;
        for (int b = 0; b < 4; ++b) jtj[a][b] += j[a] * j[b];
      }
    }
    if (std::abs(prev_chi2 - chi2) < 1e-10 * (1.0 + chi2) && iter > 2)
      return true;
    prev_chi2 = chi2;

    double m[4][5];
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) m[a][b] = jtj[a][b];
      m[a][a] *= 1.0 + lambda;
      m[a][4] = jtr[a];
    }
    // Gaussian elimination with partial pivoting.
    for (int col = 0; col < 4; ++col) {
      int pivot = col;
      for (int row = col + 1; row < 4; ++row)
        if (std::abs(m[row][col]) > std::abs(m[pivot][col])) pivot = row;
      std::swap_ranges(m[col], m[col] + 5, m[pivot]);
      if (std::abs(m[col][col]) < 1e-12) return false;
      for (int row = 0; row < 4; ++row) {
        if (row == col) continue;
        const double f = m[row][col] / m[col][col];
        for (int k = col; k < 5; ++k) m[row][k] -= f * m[col][k];
      }
    }
    const double step[4] = {m[0][4] / m[0][0], m[1][4] / m[1][1],
                            m[2][4] / m[2][2], m[3][4] / m[3][3]};
    FitParams trial = p;
    trial.wing += step[0];
    trial.visibility += step[1];
    trial.center += step[2];
    trial.width += step[3];
    if (trial.wing <= 0.0 || trial.width <= 0.0 ||
        !std::isfinite(trial.visibility)) {
      lambda *= 10.0;
      continue;
    }
    p = trial;
    lambda = std::max(1e-7, lambda * 0.5);
  }
  return true;
}

}  // namespace

void HomConfig::validate() const {
  if (n_bar_1 < 0.0 || n_bar_2 < 0.0)
    throw std::invalid_argument("hom: mean photon numbers must be >= 0");
  if (pump_bandwidth_ghz <= 0.0 || herald_bandwidth_ghz <= 0.0 ||
      output_filter_bandwidth_ghz <= 0.0)
    throw std::invalid_argument("hom: bandwidths must be > 0");
  if (delay_step_ps <= 0.0 || delay_stop_ps <= delay_start_ps)
    throw std::invalid_argument("hom: bad delay scan");
  if (fit_resamples < 1)
    throw std::invalid_argument("hom: need at least one fit resample");
}

double coincidence_probability(double n1, double n2, double g2_1, double g2_2,
                               double i12) {
  if (i12 < 0.0 || i12 > 1.0)
    throw std::invalid_argument("hom: interference factor must be in [0,1]");
  return 0.25 * (g2_1 * n1 * n1 + g2_2 * n2 * n2 + 2.0 * n1 * n2 -
                 2.0 * n1 * n2 * i12);
}

double visibility_two_fold(double n1, double n2) {
  if (n1 <= 0.0 || n2 <= 0.0)
    throw std::invalid_argument("hom: mean photon numbers must be > 0");
  return 2.0 / (2.0 * n1 / n2 + n2 / n1 + 2.0);
}

double visibility_three_fold(double n1, double n2) {
  if (n1 <= 0.0)
    throw std::invalid_argument("hom: heralded arm mean must be > 0");
  if (n2 < 0.0)
    throw std::invalid_argument("hom: coherent arm mean must be >= 0");
  return 2.0 / (n2 / n1 + 2.0);
}

double bandwidth_correction(double pump_bandwidth_ghz,
                            double herald_bandwidth_ghz,
                            double output_filter_bandwidth_ghz) {
  if (pump_bandwidth_ghz <= 0.0 || herald_bandwidth_ghz <= 0.0 ||
      output_filter_bandwidth_ghz <= 0.0)
    throw std::invalid_argument("hom: bandwidths must be > 0");
  const double doubled_pump = std::sqrt(2.0) * pump_bandwidth_ghz;
  const double external = convolved_fwhm(doubled_pump, herald_bandwidth_ghz);
  const double w1 = filtered_fwhm(external, output_filter_bandwidth_ghz);
  const double w2 = pump_bandwidth_ghz;
  return 2.0 * w1 * w2 / (w1 * w1 + w2 * w2);
}

double corrected_three_fold_bound(double n1, double n2,
                                  double bandwidth_factor) {
  return bandwidth_factor * visibility_three_fold(n1, n2);
}

double single_photon_replacement_visibility(double g2_heralded,
                                            double bandwidth_factor) {
  if (g2_heralded < 0.0)
    throw std::invalid_argument("hom: g2 must be >= 0");
  return bandwidth_factor * (1.0 - 2.0 * g2_heralded);
}

void DipCurve::write_csv(std::ostream& os) const {
  os << "delay_ps,two_fold,two_fold_err,three_fold,three_fold_err\n";
  char buf[160];
  for (std::size_t i = 0; i < delays_ps.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.6g,%.6g,%.6g,%.6g,%.6g\n", delays_ps[i],
                  two_fold[i], two_fold_err[i], three_fold[i],
                  three_fold_err[i]);
    os << buf;
  }
}

DipCurve hom_dip_scan(const HomConfig& config, Rng& rng) {
  config.validate();
  const double narrow_width_ghz =
      std::min(filtered_source_width_ghz(config), config.pump_bandwidth_ghz);
  const double tau_c_ps = coherence_time_ps(narrow_width_ghz);
  if (std::max(std::abs(config.delay_start_ps), std::abs(config.delay_stop_ps)) <
      3.0 * tau_c_ps)
    throw std::invalid_argument("hom: delay scan too narrow to establish wings");

  DipCurve curve;
  for (double d = config.delay_start_ps; d <= config.delay_stop_ps + 1e-9;
       d += config.delay_step_ps)
    curve.delays_ps.push_back(d);

  const double n1 = config.n_bar_1;
  const double n2 = config.n_bar_2;
  auto expected = [&](double g2_1, double delay_ps) {
    const double z = delay_ps / tau_c_ps;
    const double i12 = config.bandwidth_factor * std::exp(-z * z);
    return coincidence_probability(n1, n2, g2_1, config.g2_arm2, i12);
  };
  const double wing2 = coincidence_probability(n1, n2, config.g2_arm1_thermal,
                                               config.g2_arm2, 0.0);
  const double wing3 =
      coincidence_probability(n1, n2, config.g2_arm1, config.g2_arm2, 0.0);
  if (wing2 <= 0.0 || wing3 <= 0.0)
    throw std::invalid_argument("hom: degenerate configuration, empty wings");
  curve.two_fold_expected =
      1.0 - expected(config.g2_arm1_thermal, 0.0) / wing2;
  curve.three_fold_expected = 1.0 - expected(config.g2_arm1, 0.0) / wing3;

  const std::size_t n_points = curve.delays_ps.size();
  curve.two_fold.resize(n_points);
  curve.two_fold_err.resize(n_points);
  curve.three_fold.resize(n_points);
  curve.three_fold_err.resize(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    const double d = curve.delays_ps[i];
    const double mean2 = expected(config.g2_arm1_thermal, d) / wing2 *
                         config.two_fold_wing_counts;
    const double mean3 =
        expected(config.g2_arm1, d) / wing3 * config.three_fold_wing_counts;
    curve.two_fold[i] =
        config.noise_enabled ? static_cast<double>(rng.poisson(mean2)) : mean2;
    curve.three_fold[i] =
        config.noise_enabled ? static_cast<double>(rng.poisson(mean3)) : mean3;
    curve.two_fold_err[i] = std::sqrt(std::max(curve.two_fold[i], 1.0));
    curve.three_fold_err[i] = std::sqrt(std::max(curve.three_fold[i], 1.0));
  }

  auto fit_with_resamples = [&](const std::vector<double>& counts,
                                double wing_counts) {
    FitParams init;
    init.wing = wing_counts;
    init.center = 0.0;
    init.width = tau_c_ps;
    const double min_count =
        *std::min_element(counts.begin(), counts.end());
    init.visibility = std::clamp(1.0 - min_count / wing_counts, 0.05, 1.0);

    DipFit fit;
    double sum = 0.0, sum_sq = 0.0;
    int good = 0;
    FitParams base = init;
    fit.converged = fit_gaussian_dip(curve.delays_ps, counts, base);
    std::vector<double> resampled(counts.size());
    for (int r = 0; r < config.fit_resamples; ++r) {
      for (std::size_t i = 0; i < counts.size(); ++i)
        resampled[i] = config.noise_enabled
                           ? static_cast<double>(rng.poisson(counts[i]))
                           : counts[i];
      FitParams p = init;
      if (!fit_gaussian_dip(curve.delays_ps, resampled, p)) continue;
      sum += p.visibility;
      sum_sq += p.visibility * p.visibility;
      ++good;
    }
    if (good > 0) {
      fit.visibility = sum / good;
      fit.visibility_std =
          good > 1 ? std::sqrt(std::max(0.0, sum_sq / good -
                                                 fit.visibility * fit.visibility))
                   : 0.0;
    }
    fit.wing = base.wing;
    fit.center_ps = base.center;
    fit.width_ps = base.width;
    return fit;
  };

  curve.two_fold_fit =
      fit_with_resamples(curve.two_fold, config.two_fold_wing_counts);
  curve.three_fold_fit =
      fit_with_resamples(curve.three_fold, config.three_fold_wing_counts);
  return curve;
}

}  // namespace specmux::hom
