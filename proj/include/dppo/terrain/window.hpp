#ifndef DPPO_TERRAIN_WINDOW_HPP_
#define DPPO_TERRAIN_WINDOW_HPP_

#include <cstddef>
#include <vector>

#include "dppo/terrain/heightfield.hpp"

namespace dppo::terrain {

inline constexpr std::size_t kWindowSamples = 50;
inline constexpr double kWindowBehind = 2.0;
inline constexpr double kWindowAhead = 8.0;
inline constexpr double kGapSentinel = -1.0;
// 50 ground samples, 50 platform samples, height above ground, grid offset.
inline constexpr std::size_t kWindowFeatures = 2 * kWindowSamples + 2;

double window_abscissa(double x_body, std::size_t j);

// Ground samples relative to the ground under the body (gaps read as the
// sentinel), platform heights above ground (0 where absent), the body's
// height above the ground under it and the distance from x_body to the next
// pixel center.
std::vector<double> sample_height_window(const Heightfield& hf, double x_body,
                                         double z_body = 0.0);

}  // namespace dppo::terrain

#endif  // DPPO_TERRAIN_WINDOW_HPP_
