#include "dppo/ppo/adaptive.hpp"

#include <algorithm>

#include "dppo/errors.hpp"

namespace dppo::ppo {

double alpha_tilde(const PpoConfig& cfg, std::size_t workers) {
  const std::size_t n = cfg.alpha_divisor == AlphaDivisor::kWorkers ? workers : cfg.K;
  if (n == 0) throw ConfigError("alpha_tilde: divisor is zero");
  return 1.0 + (cfg.alpha - 1.0) / static_cast<double>(n);
}

double adapt_lambda(double lambda, double kl, const PpoConfig& cfg, double a) {
  if (kl > cfg.beta_high * cfg.kl_target) {
    lambda *= a;
  } else if (kl < cfg.beta_low * cfg.kl_target) {
    lambda /= a;
  }
  return std::clamp(lambda, cfg.lambda_min, cfg.lambda_max);
}

StopDecision early_stop_check(double kl, double kl_target, double factor) {
  return kl > factor * kl_target ? StopDecision::kBreak : StopDecision::kProceed;
}

}  // namespace dppo::ppo
