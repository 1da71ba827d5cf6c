#include "dppo/terrain/window.hpp"

#include <cmath>

namespace dppo::terrain {

double window_abscissa(double x_body, std::size_t j) {
  constexpr double kStep = (kWindowBehind + kWindowAhead) / static_cast<double>(kWindowSamples - 1);
  return x_body - kWindowBehind + static_cast<double>(j) * kStep;
}

std::vector<double> sample_height_window(const Heightfield& hf, double x_body, double z_body) {
  std::vector<double> f(kWindowFeatures, 0.0);
  const double ref = query_height(hf, x_body).ground;
  for (std::size_t j = 0; j < kWindowSamples; ++j) {
    const HeightQuery q = query_height(hf, window_abscissa(x_body, j));
    f[j] = q.gap ? kGapSentinel : q.ground - ref;
    f[kWindowSamples + j] = q.has_platform ? q.platform : 0.0;
  }
  f[2 * kWindowSamples] = z_body - ref;
  // Distance to the next pixel center at or ahead of the body.
  const double c = (std::floor(x_body / hf.pixel) + 0.5) * hf.pixel;
  f[2 * kWindowSamples + 1] = c >= x_body ? c - x_body : c + hf.pixel - x_body;
  return f;
}

}  // namespace dppo::terrain
