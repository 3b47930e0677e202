#include "specmux/system.hpp"

namespace specmux::model {

void SystemModel::finalize() {
  // The untwinned band occupies the output-filter acceptance outside the
  // channel-conjugate core: offsets between channel/2 and filter/2 on both
  // sides. Its average transmission through the Gaussian filter profile,
  // displaced by k spacings, comes from a straightforward quadrature.
  const double inner = channel_fwhm_ghz / 2.0;
  const double outer = output_filter_fwhm_ghz / 2.0;
  const int steps = 256;
  const double dv = (outer - inner) / steps;
  for (int k = 0; k < 4; ++k) {
    const double shift = k * channel_spacing_ghz;
    double sum = 0.0;
    for (int i = 0; i < steps; ++i) {
      const double v = inner + (i + 0.5) * dv;
      sum += gaussian_fwhm_profile(v - shift, output_filter_fwhm_ghz);
      sum += gaussian_fwhm_profile(-v - shift, output_filter_fwhm_ghz);
    }
    background_profile[k] = sum / (2.0 * steps);
  }
}

}  // namespace specmux::model
