#include "dppo/policy/gaussian.hpp"

#include <cmath>
#include <numbers>

#include "dppo/errors.hpp"

namespace dppo::policy {
namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;  // 0.5 * log(2 pi)

}  // namespace

double gaussian_log_prob(std::span<const double> mean, std::span<const double> log_std,
                         std::span<const double> action) {
  require_shape(mean.size() == log_std.size() && mean.size() == action.size(),
                "gaussian_log_prob: dimension mismatch");
  double lp = 0.0;
  for (std::size_t k = 0; k < mean.size(); ++k) {
    const double z = (action[k] - mean[k]) * std::exp(-log_std[k]);
    lp += -0.5 * z * z - log_std[k] - kHalfLog2Pi;
  }
  return lp;
}

void gaussian_log_prob_grad(std::span<const double> mean, std::span<const double> log_std,
                            std::span<const double> action, double coef,
                            std::span<double> d_mean, std::span<double> d_log_std) {
  for (std::size_t k = 0; k < mean.size(); ++k) {
    const double inv_std = std::exp(-log_std[k]);
    const double z = (action[k] - mean[k]) * inv_std;
    d_mean[k] += coef * z * inv_std;
    d_log_std[k] += coef * (z * z - 1.0);
  }
}

void kl_diag_gaussian_log_grad_q(std::span<const double> mean_p,
                                 std::span<const double> log_std_p,
                                 std::span<const double> mean_q,
                                 std::span<const double> log_std_q, double coef,
                                 std::span<double> d_mean_q, std::span<double> d_log_std_q) {
  for (std::size_t k = 0; k < mean_p.size(); ++k) {
    const double d = mean_q[k] - mean_p[k];
    const double inv_var_q = std::exp(-2.0 * log_std_q[k]);
    const double var_p = std::exp(2.0 * log_std_p[k]);
    d_mean_q[k] += coef * d * inv_var_q;
    d_log_std_q[k] += coef * (1.0 - (var_p + d * d) * inv_var_q);
  }
}

double kl_diag_gaussian_log(std::span<const double> mean_p, std::span<const double> log_std_p,
                            std::span<const double> mean_q, std::span<const double> log_std_q) {
  require_shape(mean_p.size() == log_std_p.size() && mean_q.size() == log_std_q.size() &&
                    mean_p.size() == mean_q.size(),
                "kl_diag_gaussian: dimension mismatch");
  double kl = 0.0;
  for (std::size_t k = 0; k < mean_p.size(); ++k) {
    const double d = mean_p[k] - mean_q[k];
    const double var_ratio = std::exp(2.0 * (log_std_p[k] - log_std_q[k]));
    const double inv_var_q = std::exp(-2.0 * log_std_q[k]);
    kl += (log_std_q[k] - log_std_p[k]) + 0.5 * (var_ratio + d * d * inv_var_q) - 0.5;
  }
  return kl;
}

double kl_diag_gaussian(const DiagGaussian& p, const DiagGaussian& q) {
  require_shape(p.mean.size() == p.stddev.size() && q.mean.size() == q.stddev.size() &&
                    p.mean.size() == q.mean.size(),
                "kl_diag_gaussian: dimension mismatch");
  Vector lp(p.stddev.size()), lq(q.stddev.size());
  for (std::size_t k = 0; k < lp.size(); ++k) {
    if (!(p.stddev[k] > 0.0) || !(q.stddev[k] > 0.0)) {
      throw ConfigError("kl_diag_gaussian: standard deviations must be positive");
    }
    lp[k] = std::log(p.stddev[k]);
    lq[k] = std::log(q.stddev[k]);
  }
  return kl_diag_gaussian_log(p.mean, lp, q.mean, lq);
}

}  // namespace dppo::policy
