#include "dppo/envs/hopper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dppo/envs/rewards.hpp"
#include "dppo/errors.hpp"
#include "dppo/rng.hpp"
#include "dppo/terrain/window.hpp"

namespace dppo::envs {

std::size_t CourseMixture::pick(std::uint64_t episode_seed) const {
  if (specs.empty()) throw ConfigError("course mixture is empty");
  if (!weights.empty() && weights.size() != specs.size()) {
    throw ConfigError("course mixture weights do not match its specs");
  }
  const double u = CounterRng::keyed(episode_seed, {0x6d6978ULL}).uniform();
  if (weights.empty()) {
    return std::min(specs.size() - 1, static_cast<std::size_t>(u * static_cast<double>(specs.size())));
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw ConfigError("course mixture weights must be nonnegative");
    total += w;
  }
  if (!(total > 0.0)) throw ConfigError("course mixture weights sum to zero");
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i] / total;
    if (u < acc) return i;
  }
  return specs.size() - 1;
}

Hopper::Hopper(CourseMixture courses, HopperParams p, Perturbation perturb)
    : courses_(std::move(courses)), p_(p), perturb_(perturb) {
  for (const auto& s : courses_.specs) s.validate();
  if (courses_.specs.empty()) throw ConfigError("hopper needs at least one course spec");
  if (p_.substeps == 0 || !(p_.dt > 0.0)) throw ConfigError("hopper time step must be positive");
  if (!(p_.leg_min > 0.0 && p_.leg_min <= p_.leg_rest && p_.leg_rest <= p_.leg_max)) {
    throw ConfigError("hopper leg limits must satisfy 0 < min <= rest <= max");
  }
}

std::size_t Hopper::obs_dim() const { return kProprio + terrain::kWindowFeatures; }

Vector Hopper::reset(std::uint64_t episode_seed) {
  const auto& spec = courses_.specs[courses_.pick(episode_seed)];
  return reset_on(terrain::generate_course(spec, episode_seed), episode_seed);
}

Vector Hopper::reset_on(terrain::Heightfield field, std::uint64_t episode_seed) {
  field.validate();
  field_ = std::move(field);
  rubble_.assign(field_.size(), 0.0);
  if (perturb_.rubble > 0.0) {
    auto rng = CounterRng::keyed(episode_seed, {0x727562ULL});
    for (auto& r : rubble_) r = rng.uniform(0.0, perturb_.rubble);
  }
  s_ = State{};
  s_.x = s_.start_x = p_.spawn_x;
  s_.leg = p_.leg_rest;
  s_.z = support(s_.x) + s_.leg;
  s_.contact = true;
  return observe();
}

double Hopper::support(double x) const {
  const std::size_t i = field_.pixel_index(x);
  if (field_.gap[i]) return -std::numeric_limits<double>::infinity();
  return field_.ground[i] + (field_.has_platform[i] ? field_.platform[i] : 0.0) + rubble_[i];
}

double Hopper::energy() const {
  const double g = p_.gravity;
  return 0.5 * (s_.vx * s_.vx + s_.vz * s_.vz) + g * s_.z + 0.5 * p_.inertia * s_.omega * s_.omega;
}

Vector Hopper::observe() const {
  Vector o{s_.theta, s_.omega, s_.vx, s_.vz, s_.leg, s_.leg_rate, s_.contact ? 1.0 : 0.0};
  const auto w = terrain::sample_height_window(field_, s_.x, s_.z);
  o.insert(o.end(), w.begin(), w.end());
  return o;
}

void Hopper::substep(const double u[3]) {
  const double h = p_.dt;
  const double gain = perturb_.gain;
  const double g_n = p_.gravity * std::cos(perturb_.incline);
  const double g_t = p_.gravity * std::sin(perturb_.incline);

  s_.omega += h * (p_.torque * gain * u[0] - p_.angular_damping * s_.omega) / p_.inertia;
  s_.theta += h * s_.omega;

  double rate = p_.leg_speed * gain * u[1];
  s_.leg_rate = rate;
  if (s_.contact) {
    const double lim = p_.friction * perturb_.friction * g_n;
    const double f = std::clamp(p_.drive * gain * u[2] - p_.drag * s_.vx + g_t, -lim, lim);
    s_.vx += h * (f - g_t);
    if ((s_.leg >= p_.leg_max && rate > 0.0) || (s_.leg <= p_.leg_min && rate < 0.0)) rate = 0.0;
    if (rate >= s_.vz - g_n * h) {
      // The ground pushes: the torso follows the leg.
      const double foot = s_.z - s_.leg;
      s_.vz = rate;
      s_.leg = std::clamp(s_.leg + h * rate, p_.leg_min, p_.leg_max);
      s_.z = foot + s_.leg;
    } else {
      s_.contact = false;
    }
  }
  if (!s_.contact) {
    s_.vz -= h * g_n;
    s_.vx += h * (p_.air_drive * gain * u[2] - g_t);
    s_.z += h * s_.vz;
    s_.leg = std::clamp(s_.leg + h * rate, p_.leg_min, p_.leg_max);
  }

  // Horizontal motion; terrain steps taller than the tolerance block the foot.
  const double foot = s_.z - s_.leg;
  const double x_new = s_.x + h * s_.vx;
  if (support(x_new) > foot + p_.step_tolerance) {
    s_.vx = 0.0;
  } else {
    s_.x = x_new;
  }
  const double ground = support(s_.x);
  if (s_.contact) {
    if (ground < foot - 1e-12) {
      s_.contact = false;  // walked off an edge
    } else if (ground > foot) {
      s_.z += ground - foot;  // small step up
    }
  } else if (s_.z - s_.leg <= ground) {
    s_.z = ground + s_.leg;
    if (s_.vz < 0.0) s_.vz = 0.0;
    s_.contact = true;
  }
}

StepResult Hopper::step(std::span<const double> action) {
  require_shape(action.size() == 3, "hopper expects 3 actions");
  if (field_.size() == 0) throw StateError("hopper stepped before reset");
  double u[3];
  for (int k = 0; k < 3; ++k) u[k] = std::clamp(action[k], -1.0, 1.0);
  for (std::size_t k = 0; k < p_.substeps; ++k) substep(u);
  ++s_.t;
  for (double v : {s_.x, s_.z, s_.vx, s_.vz, s_.theta, s_.omega, s_.leg}) {
    if (!std::isfinite(v)) throw NonFiniteError("hopper state became non-finite");
  }
  StepResult r;
  const double dh = s_.leg;
  r.reward = reward_walker(s_.vx, std::cos(s_.theta), dh, std::span<const double>(u, 3));
  if (std::abs(s_.theta) > 1.0) {
    r.reason = DoneReason::kTilted;
  } else if (dh < 0.3) {
    r.reason = DoneReason::kLowTorso;
  } else if (s_.z - s_.leg < -1.0) {
    r.reason = DoneReason::kFellInGap;
  } else if (s_.x >= field_.length() - 0.5) {
    r.reason = DoneReason::kCourseEnd;
  } else if (s_.t >= p_.max_steps) {
    r.reason = DoneReason::kTimeLimit;
  }
  r.done = r.reason != DoneReason::kNone;
  r.obs = observe();
  return r;
}

}  // namespace dppo::envs
