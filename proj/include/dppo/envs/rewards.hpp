#ifndef DPPO_ENVS_REWARDS_HPP_
#define DPPO_ENVS_REWARDS_HPP_

#include <span>

namespace dppo::envs {

// 10 v_x + 0.5 n_z - |dh - 1.2| - 10 [dh < 0.3] - 0.1 |u|^2
double reward_walker(double v_x, double n_z, double delta_h, std::span<const double> u);

// v_x + 0.05 n_z - 0.01 |u|^2
double reward_quadruped(double v_x, double n_z, std::span<const double> u);

// min(v_x, v_max) - 0.005 (v_x^2 + v_y^2) - 0.05 y^2 - 0.02 |u|^2 + 0.02
double reward_humanoid(double v_x, double v_y, double y, std::span<const double> u,
                       double v_max = 4.0);

}  // namespace dppo::envs

#endif  // DPPO_ENVS_REWARDS_HPP_
