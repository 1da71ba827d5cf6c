#ifndef DPPO_ENVS_HOPPER_HPP_
#define DPPO_ENVS_HOPPER_HPP_

#include <vector>

#include "dppo/envs/environment.hpp"
#include "dppo/terrain/course.hpp"

namespace dppo::envs {

// Unobserved changes to the body or ground for robustness probes.
struct Perturbation {
  double friction = 1.0;   // multiplier on the friction coefficient
  double rubble = 0.0;     // max per-pixel height noise (m), physics only
  double gain = 1.0;       // actuator strength multiplier
  double incline = 0.0;    // ground slope (rad), as tilted gravity
  bool operator==(const Perturbation&) const = default;
};

struct HopperParams {
  double dt = 0.01;           // physics substep
  std::size_t substeps = 4;   // per control step
  double gravity = 9.81;
  double friction = 1.0;      // Coulomb coefficient
  double drive = 5.0;         // horizontal drive acceleration per unit action
  double air_drive = 1.0;
  double drag = 1.0;          // velocity damping of the drive in contact
  double leg_speed = 4.0;     // leg extension rate per unit action (m/s)
  double leg_min = 0.4;
  double leg_max = 1.2;
  double leg_rest = 1.2;
  double torque = 4.0;        // torso actuator
  double inertia = 1.0;
  double angular_damping = 1.0;
  double step_tolerance = 0.02;  // taller terrain steps block the foot
  double spawn_x = 2.0;
  std::size_t max_steps = 1000;
  bool operator==(const HopperParams&) const = default;
};

// Weighted choice among course specs, one draw per episode seed.
struct CourseMixture {
  std::vector<terrain::CourseSpec> specs;
  std::vector<double> weights;  // empty: uniform

  std::size_t pick(std::uint64_t episode_seed) const;
};

// Planar hopper: a torso on one vertical telescoping leg. Actions are
// [torso torque, leg extension rate, horizontal drive]. Observations are 7
// proprioceptive values (theta, omega, v_x, v_z, leg length, leg rate,
// contact) followed by the terrain window.
class Hopper : public Environment {
 public:
  struct State {
    double x = 0.0, z = 0.0, vx = 0.0, vz = 0.0;
    double theta = 0.0, omega = 0.0;
    double leg = 1.2, leg_rate = 0.0;
    bool contact = true;
    std::size_t t = 0;
    double start_x = 0.0;
    bool operator==(const State&) const = default;
  };

  static constexpr std::size_t kProprio = 7;

  Hopper(CourseMixture courses, HopperParams p = {}, Perturbation perturb = {});

  std::size_t obs_dim() const override;
  std::size_t proprio_dim() const override { return kProprio; }
  std::size_t act_dim() const override { return 3; }
  Vector reset(std::uint64_t episode_seed) override;
  StepResult step(std::span<const double> action) override;
  Pose pose() const override { return {s_.x, s_.z, s_.theta}; }
  double distance() const override { return s_.x - s_.start_x; }
  std::unique_ptr<Environment> clone() const override { return std::make_unique<Hopper>(*this); }

  // Starts on a given field (bypasses the mixture).
  Vector reset_on(terrain::Heightfield field, std::uint64_t episode_seed);

  const State& state() const { return s_; }
  void set_state(const State& s) { s_ = s; }
  const terrain::Heightfield& field() const { return field_; }
  const HopperParams& params() const { return p_; }
  const Perturbation& perturbation() const { return perturb_; }
  void set_perturbation(const Perturbation& p) { perturb_ = p; }
  // Height of the supporting surface under x, including rubble; -inf over gaps.
  double support(double x) const;
  double energy() const;
  Vector observe() const;

 private:
  void substep(const double u[3]);

  CourseMixture courses_;
  HopperParams p_;
  Perturbation perturb_;
  terrain::Heightfield field_;
  std::vector<double> rubble_;
  State s_;
};

}  // namespace dppo::envs

#endif  // DPPO_ENVS_HOPPER_HPP_
