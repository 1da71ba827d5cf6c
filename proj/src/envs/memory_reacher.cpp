#include "dppo/envs/memory_reacher.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dppo/errors.hpp"
#include "dppo/rng.hpp"

namespace dppo::envs {

std::array<double, 2> MemoryReacher::forward_kinematics(double q1, double q2) const {
  return {p_.link1 * std::cos(q1) + p_.link2 * std::cos(q1 + q2),
          p_.link1 * std::sin(q1) + p_.link2 * std::sin(q1 + q2)};
}

std::array<double, 2> MemoryReacher::end_effector() const {
  return forward_kinematics(s_.q[0], s_.q[1]);
}

Vector MemoryReacher::reset(std::uint64_t episode_seed) {
  auto rng = CounterRng::keyed(episode_seed, {0x7265616368ULL});
  const double pi = std::numbers::pi;
  s_ = State{};
  s_.q = {rng.uniform(-pi, pi), rng.uniform(-pi, pi)};
  const double t1 = rng.uniform(-pi, pi), t2 = rng.uniform(-pi, pi);
  s_.target = forward_kinematics(t1, t2);
  return observe();
}

Vector MemoryReacher::observe() const {
  const bool visible = s_.t < p_.visible_steps;
  const bool shown = visible || !p_.hide_target;
  Vector o{std::cos(s_.q[0]),
          std::sin(s_.q[0]),
          std::cos(s_.q[1]),
          std::sin(s_.q[1]),
          s_.dq[0],
          s_.dq[1],
          shown ? s_.target[0] : 0.0,
          shown ? s_.target[1] : 0.0,
          visible ? 1.0 : 0.0};
  if (p_.observe_end_effector) {
    const auto ee = end_effector();
    o.push_back(ee[0]);
    o.push_back(ee[1]);
  }
  return o;
}

double MemoryReacher::distance() const {
  const auto ee = end_effector();
  return std::hypot(ee[0] - s_.target[0], ee[1] - s_.target[1]);
}

StepResult MemoryReacher::step(std::span<const double> action) {
  require_shape(action.size() == 2, "reacher expects 2 actions");
  if (s_.t >= p_.episode_length) throw StateError("reacher stepped after the episode ended");
  if (s_.t >= p_.visible_steps) {
    for (int k = 0; k < 2; ++k) {
      const double a = std::clamp(action[k], -1.0, 1.0);
      s_.dq[k] += p_.dt * (p_.gain * a - p_.damping * s_.dq[k]);
      s_.q[k] += p_.dt * s_.dq[k];
    }
  }
  ++s_.t;
  StepResult r;
  r.obs = observe();
  r.reward = -distance();
  r.done = s_.t >= p_.episode_length;
  r.reason = r.done ? DoneReason::kTimeLimit : DoneReason::kNone;
  return r;
}

Pose MemoryReacher::pose() const {
  const auto ee = end_effector();
  return {ee[0], ee[1], s_.q[0]};
}

}  // namespace dppo::envs
