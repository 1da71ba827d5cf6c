#ifndef DPPO_HARNESS_EVALUATE_HPP_
#define DPPO_HARNESS_EVALUATE_HPP_

#include <memory>
#include <string>
#include <vector>

#include "dppo/envs/environment.hpp"
#include "dppo/harness/config.hpp"
#include "dppo/nn/checkpoint.hpp"
#include "dppo/policy/gaussian_policy.hpp"
#include "dppo/stats/running_moments.hpp"

namespace dppo::harness {

// Builds the training environment of `c` for one worker.
std::unique_ptr<envs::Environment> make_env(const ExperimentConfig& c);
// Stationary hurdle course with heights drawn from `heights`, on the
// configured body.
std::unique_ptr<envs::Environment> make_hurdle_env(const ExperimentConfig& c, terrain::Range heights,
                                                   const envs::Perturbation& perturb = {});
std::unique_ptr<envs::Environment> make_flat_env(const ExperimentConfig& c,
                                                 const envs::Perturbation& perturb = {});

policy::NetSpec policy_spec(const ExperimentConfig& c, const envs::Environment& env);
policy::NetSpec value_spec(const ExperimentConfig& c, const envs::Environment& env);

// A frozen policy with the observation statistics it was trained with.
struct PolicySnapshot {
  ExperimentConfig config;
  policy::GaussianPolicy policy;
  stats::RunningMoments obs_stats;
  std::uint64_t iteration = 0;  // iterations completed
};

PolicySnapshot snapshot_from_checkpoint(const nn::Checkpoint& ck);
PolicySnapshot load_snapshot(const std::string& path);

struct EvalOptions {
  std::size_t episodes = 10;
  std::uint64_t seed = 1000;
  bool mean_action = false;
};

struct EvalStats {
  std::vector<double> returns;
  std::vector<double> distances;
  double mean = 0.0;
  double median = 0.0;
  double min = 0.0;
  double max = 0.0;
  double mean_distance = 0.0;
};

// Runs episodes with fixed seeds; statistics are never updated. Throws
// ConfigError if the environment and policy dimensions differ.
EvalStats evaluate(const policy::GaussianPolicy& pi, const stats::RunningMoments& obs_stats,
                   envs::Environment& env, const EvalOptions& opt);
EvalStats evaluate(const PolicySnapshot& snap, envs::Environment& env, const EvalOptions& opt);

}  // namespace dppo::harness

#endif  // DPPO_HARNESS_EVALUATE_HPP_
