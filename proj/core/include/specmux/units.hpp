#pragma once

#include <cmath>

namespace specmux {

inline constexpr double kGhzPerThz = 1.0e3;
inline constexpr double kHzPerThz = 1.0e12;
inline constexpr double kHzPerGhz = 1.0e9;
inline constexpr double kHzPerMhz = 1.0e6;

/// dB attenuation -> linear power transmission.
inline double db_to_transmission(double loss_db) {
  return std::pow(10.0, -loss_db / 10.0);
}

inline double transmission_to_db(double transmission) {
  return -10.0 * std::log10(transmission);
}

/// Normalized Gaussian profile peaking at 1, parameterized by its FWHM.
inline double gaussian_fwhm_profile(double offset, double fwhm) {
  const double x = offset / fwhm;
  return std::exp(-4.0 * M_LN2 * x * x);
}

/// FWHM of the convolution of two Gaussian profiles.
inline double convolved_fwhm(double fwhm_a, double fwhm_b) {
  return std::sqrt(fwhm_a * fwhm_a + fwhm_b * fwhm_b);
}

/// FWHM of the product of two Gaussian profiles (e.g. a photon spectrum
/// truncated by a Gaussian bandpass).
inline double filtered_fwhm(double fwhm_a, double fwhm_b) {
  return fwhm_a * fwhm_b / convolved_fwhm(fwhm_a, fwhm_b);
}

}  // namespace specmux
