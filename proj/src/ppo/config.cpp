#include "dppo/ppo/config.hpp"

#include "dppo/errors.hpp"

namespace dppo::ppo {
namespace {

void need(bool ok, const char* what) {
  if (!ok) throw ConfigError(std::string("ppo: ") + what);
}

}  // namespace

void PpoConfig::validate() const {
  need(gamma > 0.0 && gamma <= 1.0, "gamma must lie in (0, 1]");
  need(K >= 1, "window length K must be at least 1");
  need(T >= 1, "T must be at least 1");
  need(K <= T, "window length K must not exceed T");
  need(alpha > 1.0, "alpha must exceed 1");
  need(beta_low > 0.0 && beta_low < 1.0, "beta_low must lie in (0, 1)");
  need(beta_high > 1.0, "beta_high must exceed 1");
  need(kl_target > 0.0, "kl_target must be positive");
  need(xi >= 0.0, "xi must be nonnegative");
  need(lambda_min > 0.0 && lambda_min <= lambda_max, "lambda bounds must be positive and ordered");
  need(lambda0 >= lambda_min && lambda0 <= lambda_max, "lambda0 must lie within the lambda bounds");
  need(lr_policy > 0.0 && lr_baseline > 0.0, "learning rates must be positive");
  need(early_stop_factor > 0.0, "early_stop_factor must be positive");
  need(max_log_ratio > 0.0, "max_log_ratio must be positive");
}

std::string to_string(BootstrapExponent e) {
  return e == BootstrapExponent::kStepsToBootstrap ? "steps" : "steps_minus_one";
}

BootstrapExponent bootstrap_from_string(const std::string& s) {
  if (s == "steps") return BootstrapExponent::kStepsToBootstrap;
  if (s == "steps_minus_one") return BootstrapExponent::kStepsMinusOne;
  throw ConfigError("unknown bootstrap exponent '" + s + "' (steps | steps_minus_one)");
}

std::string to_string(AlphaDivisor d) { return d == AlphaDivisor::kWorkers ? "workers" : "window"; }

AlphaDivisor alpha_divisor_from_string(const std::string& s) {
  if (s == "workers") return AlphaDivisor::kWorkers;
  if (s == "window") return AlphaDivisor::kWindow;
  throw ConfigError("unknown alpha divisor '" + s + "' (workers | window)");
}

}  // namespace dppo::ppo
