#include "dppo/envs/rewards.hpp"

#include <algorithm>
#include <cmath>

namespace dppo::envs {
namespace {

double sq_norm(std::span<const double> u) {
  double s = 0.0;
  for (double v : u) s += v * v;
  return s;
}

}  // namespace

double reward_walker(double v_x, double n_z, double delta_h, std::span<const double> u) {
  return 10.0 * v_x + 0.5 * n_z - std::abs(delta_h - 1.2) - (delta_h < 0.3 ? 10.0 : 0.0) -
         0.1 * sq_norm(u);
}

double reward_quadruped(double v_x, double n_z, std::span<const double> u) {
  return v_x + 0.05 * n_z - 0.01 * sq_norm(u);
}

double reward_humanoid(double v_x, double v_y, double y, std::span<const double> u,
                       double v_max) {
  return std::min(v_x, v_max) - 0.005 * (v_x * v_x + v_y * v_y) - 0.05 * y * y -
         0.02 * sq_norm(u) + 0.02;
}

}  // namespace dppo::envs
