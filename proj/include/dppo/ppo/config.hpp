#ifndef DPPO_PPO_CONFIG_HPP_
#define DPPO_PPO_CONFIG_HPP_

#include <cstddef>
#include <string>

namespace dppo::ppo {

// Exponent of gamma on the bootstrap value for a step t of a window ending
// at n: n - t (steps to the bootstrap state) or n - t - 1.
enum class BootstrapExponent { kStepsToBootstrap, kStepsMinusOne };

// Denominator in alpha_tilde = 1 + (alpha - 1) / N.
enum class AlphaDivisor { kWorkers, kWindow };

struct PpoConfig {
  double gamma = 0.99;
  std::size_t K = 20;        // window length
  std::size_t M = 10;        // policy rounds per iteration
  std::size_t B = 10;        // baseline rounds per iteration
  std::size_t T = 2048;      // env steps per worker per iteration
  double lambda0 = 1.0;
  double kl_target = 0.01;
  double alpha = 1.5;
  double beta_high = 2.0;
  double beta_low = 0.5;
  double xi = 20.0;
  double lambda_min = 1e-3;
  double lambda_max = 1e3;
  double lr_policy = 5e-5;
  double lr_baseline = 1e-4;
  double early_stop_factor = 4.0;
  double max_log_ratio = 30.0;   // samples with |log ratio| above are excluded
  bool normalize_advantages = true;
  BootstrapExponent bootstrap = BootstrapExponent::kStepsToBootstrap;
  AlphaDivisor alpha_divisor = AlphaDivisor::kWorkers;

  // Throws ConfigError naming the first violated constraint.
  void validate() const;
  bool operator==(const PpoConfig&) const = default;
};

std::string to_string(BootstrapExponent e);
BootstrapExponent bootstrap_from_string(const std::string& s);
std::string to_string(AlphaDivisor d);
AlphaDivisor alpha_divisor_from_string(const std::string& s);

}  // namespace dppo::ppo

#endif  // DPPO_PPO_CONFIG_HPP_
