#ifndef DPPO_PPO_RETURNS_HPP_
#define DPPO_PPO_RETURNS_HPP_

#include <vector>

#include "dppo/nn/param_vector.hpp"
#include "dppo/policy/sequence_net.hpp"
#include "dppo/ppo/config.hpp"

namespace dppo::ppo {

using nn::Vector;

// One rollout window of n <= K steps. observations and values carry one
// extra trailing entry for the state after the window; values.back() is
// the bootstrap value and is ignored when `terminal`.
struct TrajectorySegment {
  std::vector<Vector> observations;  // n + 1 (policy inputs, already normalized)
  std::vector<Vector> actions;       // n, pre-clamp
  Vector rewards;                    // n, already scaled
  Vector log_probs;                  // n, behavior policy
  std::vector<Vector> means;         // n, behavior policy means
  Vector values;                     // n + 1
  bool terminal = false;
  policy::Carry policy_carry;        // carried state at window start
  policy::Carry value_carry;

  std::size_t length() const { return rewards.size(); }
  // Throws ShapeError if the arrays disagree or n > K.
  void check(std::size_t K) const;
};

struct KStepResult {
  Vector returns;
  Vector advantages;
};

// R_t = sum_{u=t}^{n-1} gamma^(u-t) r_u + gamma^e V_boot (no bootstrap when
// terminal), A_t = R_t - V(s_t). Powers of gamma come from repeated
// multiplication so the result matches a plain discounting loop exactly.
KStepResult k_step_returns(const TrajectorySegment& seg, double gamma, std::size_t K,
                           BootstrapExponent e = BootstrapExponent::kStepsToBootstrap);

// All windows of one worker iteration with their targets.
struct AdvantageBatch {
  std::vector<TrajectorySegment> segments;
  std::vector<Vector> returns;
  std::vector<Vector> advantages;
  Vector behavior_log_std;
  bool normalized = false;

  std::size_t sample_count() const;
};

AdvantageBatch build_batch(std::vector<TrajectorySegment> segments, Vector behavior_log_std,
                           const PpoConfig& cfg);

// Shifts and scales advantages to mean 0 and standard deviation 1. A batch
// of size 1 or with standard deviation <= 1e-8 gets all-zero advantages.
// Throws ConfigError on an empty batch.
AdvantageBatch normalize_advantages(AdvantageBatch batch);

}  // namespace dppo::ppo

#endif  // DPPO_PPO_RETURNS_HPP_
