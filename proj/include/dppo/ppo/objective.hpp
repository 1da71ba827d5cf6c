#ifndef DPPO_PPO_OBJECTIVE_HPP_
#define DPPO_PPO_OBJECTIVE_HPP_

#include <cstddef>

#include "dppo/policy/gaussian_policy.hpp"
#include "dppo/ppo/returns.hpp"

namespace dppo::ppo {

// Partition of the batch for the parallel kernels. Windows are grouped into
// fixed chunks, and chunk partial sums are combined in chunk order, so the
// result does not depend on the thread count.
struct KernelOptions {
  int threads = 1;
  std::size_t chunk_windows = 16;
};

struct PolicyLoss {
  double objective = 0.0;   // J, to be maximized
  double surrogate = 0.0;   // mean ratio * advantage
  double kl = 0.0;          // mean KL(pi_old || pi_theta)
  std::size_t included = 0;
  std::size_t excluded = 0;
  Vector grad;              // dJ/dtheta
};

// J = mean(ratio * A) - lambda * KL - xi * max(0, KL - 2 kl_target)^2 over the
// included samples, with ratio = exp(log pi_theta - log pi_old).
PolicyLoss ppo_objective(const policy::GaussianPolicy& pi, const AdvantageBatch& batch,
                         double lambda, double xi, double kl_target, double max_log_ratio = 30.0,
                         const KernelOptions& opt = {});

// Plain loop over windows accumulating into one gradient; the reference for
// the chunked kernel.
PolicyLoss ppo_objective_serial(const policy::GaussianPolicy& pi, const AdvantageBatch& batch,
                                double lambda, double xi, double kl_target,
                                double max_log_ratio = 30.0);

struct BaselineLoss {
  double loss = 0.0;   // mean (R - V)^2, minimized
  std::size_t count = 0;
  Vector grad;         // dloss/dphi
};

BaselineLoss baseline_objective(const policy::ValueFunction& vf, const AdvantageBatch& batch,
                                const KernelOptions& opt = {});
BaselineLoss baseline_objective_serial(const policy::ValueFunction& vf,
                                       const AdvantageBatch& batch);

// Mean KL(pi_old || pi) over the batch states, with the carried state of
// each window.
double batch_kl(const policy::GaussianPolicy& pi, const AdvantageBatch& batch);

}  // namespace dppo::ppo

#endif  // DPPO_PPO_OBJECTIVE_HPP_
