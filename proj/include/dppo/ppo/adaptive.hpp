#ifndef DPPO_PPO_ADAPTIVE_HPP_
#define DPPO_PPO_ADAPTIVE_HPP_

#include <cstddef>

#include "dppo/ppo/config.hpp"

namespace dppo::ppo {

// 1 + (alpha - 1) / N with N the worker count or the window length.
double alpha_tilde(const PpoConfig& cfg, std::size_t workers);

// lambda * a if KL > beta_high * target, lambda / a if KL < beta_low * target,
// otherwise unchanged; then clamped to [lambda_min, lambda_max].
double adapt_lambda(double lambda, double kl, const PpoConfig& cfg, double a);

enum class StopDecision { kProceed, kBreak };

// kBreak iff kl > factor * kl_target.
StopDecision early_stop_check(double kl, double kl_target, double factor = 4.0);

}  // namespace dppo::ppo

#endif  // DPPO_PPO_ADAPTIVE_HPP_
