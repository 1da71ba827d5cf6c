#ifndef DPPO_ENVS_MEMORY_REACHER_HPP_
#define DPPO_ENVS_MEMORY_REACHER_HPP_

#include <array>

#include "dppo/envs/environment.hpp"

namespace dppo::envs {

struct ReacherParams {
  double link1 = 0.5;
  double link2 = 0.5;
  double dt = 0.05;
  double gain = 10.0;      // joint acceleration per unit action
  double damping = 2.0;
  std::size_t episode_length = 60;
  std::size_t visible_steps = 10;  // target shown and arm frozen
  bool hide_target = true;         // false: target stays in view (no memory needed)
  bool observe_end_effector = true;  // append fingertip x, y to the observation
  bool operator==(const ReacherParams&) const = default;
};

// Two-link planar arm. The target is shown for the first steps while the arm
// must stay still, then hidden; reaching it afterwards requires memory.
// Observation: cos q1, sin q1, cos q2, sin q2, dq1, dq2, target x, target y,
// target-visible flag, then optionally the fingertip position.
class MemoryReacher : public Environment {
 public:
  struct State {
    std::array<double, 2> q{};
    std::array<double, 2> dq{};
    std::array<double, 2> target{};
    std::size_t t = 0;
    bool operator==(const State&) const = default;
  };

  explicit MemoryReacher(ReacherParams p = {}) : p_(p) {}

  std::size_t obs_dim() const override { return p_.observe_end_effector ? 11 : 9; }
  std::size_t proprio_dim() const override { return obs_dim(); }
  std::size_t act_dim() const override { return 2; }
  Vector reset(std::uint64_t episode_seed) override;
  StepResult step(std::span<const double> action) override;
  Pose pose() const override;
  double distance() const override;
  std::unique_ptr<Environment> clone() const override {
    return std::make_unique<MemoryReacher>(*this);
  }

  const State& state() const { return s_; }
  void set_state(const State& s) { s_ = s; }
  const ReacherParams& params() const { return p_; }
  std::array<double, 2> end_effector() const;
  std::array<double, 2> forward_kinematics(double q1, double q2) const;
  Vector observe() const;

 private:
  ReacherParams p_;
  State s_;
};

}  // namespace dppo::envs

#endif  // DPPO_ENVS_MEMORY_REACHER_HPP_
