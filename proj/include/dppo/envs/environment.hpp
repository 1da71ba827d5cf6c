#ifndef DPPO_ENVS_ENVIRONMENT_HPP_
#define DPPO_ENVS_ENVIRONMENT_HPP_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace dppo::envs {

using Vector = std::vector<double>;

enum class DoneReason { kNone, kTimeLimit, kTilted, kLowTorso, kFellInGap, kCourseEnd };
std::string to_string(DoneReason r);

struct StepResult {
  Vector obs;
  double reward = 0.0;
  bool done = false;
  DoneReason reason = DoneReason::kNone;
};

// Planar body pose for trajectory dumps.
struct Pose {
  double x = 0.0, z = 0.0, theta = 0.0;
};

class Environment {
 public:
  virtual ~Environment() = default;
  virtual std::size_t obs_dim() const = 0;
  // Leading observation entries that are body-local; the rest (if any) are
  // terrain features.
  virtual std::size_t proprio_dim() const = 0;
  virtual std::size_t act_dim() const = 0;
  // Starts a new episode; identical seeds give identical episodes.
  virtual Vector reset(std::uint64_t episode_seed) = 0;
  // Actions are clamped to [-1, 1] inside; the caller keeps the raw action.
  virtual StepResult step(std::span<const double> action) = 0;
  virtual Pose pose() const = 0;
  virtual double distance() const = 0;  // progress along the course this episode
  virtual std::unique_ptr<Environment> clone() const = 0;
};

// CSV of (step, x, z, theta, reward, done_reason) rows.
struct TrajectoryRow {
  std::size_t step = 0;
  Pose pose;
  double reward = 0.0;
  DoneReason reason = DoneReason::kNone;
};
std::string trajectory_csv(const std::vector<TrajectoryRow>& rows);

}  // namespace dppo::envs

#endif  // DPPO_ENVS_ENVIRONMENT_HPP_
