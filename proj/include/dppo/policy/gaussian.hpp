#ifndef DPPO_POLICY_GAUSSIAN_HPP_
#define DPPO_POLICY_GAUSSIAN_HPP_

#include <span>

#include "dppo/nn/param_vector.hpp"

namespace dppo::policy {

using nn::Vector;

// Diagonal Gaussian given by mean and standard deviation.
struct DiagGaussian {
  Vector mean;
  Vector stddev;
};

// log N(action; mean, diag(exp(log_std))^2).
double gaussian_log_prob(std::span<const double> mean, std::span<const double> log_std,
                         std::span<const double> action);

// KL(p || q) in closed form, summed over dimensions. Throws ConfigError for
// non-positive standard deviations and ShapeError for unequal dimensions.
double kl_diag_gaussian(const DiagGaussian& p, const DiagGaussian& q);

// Same quantity parameterized by log standard deviations.
double kl_diag_gaussian_log(std::span<const double> mean_p, std::span<const double> log_std_p,
                            std::span<const double> mean_q, std::span<const double> log_std_q);

// Adds coef * d(log prob)/d(mean) and coef * d(log prob)/d(log_std).
void gaussian_log_prob_grad(std::span<const double> mean, std::span<const double> log_std,
                            std::span<const double> action, double coef,
                            std::span<double> d_mean, std::span<double> d_log_std);

// Adds coef * dKL(p || q)/d(mean_q) and coef * dKL/d(log_std_q); p is held
// fixed.
void kl_diag_gaussian_log_grad_q(std::span<const double> mean_p,
                                 std::span<const double> log_std_p,
                                 std::span<const double> mean_q,
                                 std::span<const double> log_std_q, double coef,
                                 std::span<double> d_mean_q, std::span<double> d_log_std_q);

}  // namespace dppo::policy

#endif  // DPPO_POLICY_GAUSSIAN_HPP_
