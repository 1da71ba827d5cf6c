#ifndef DPPO_TESTS_PPO_FIXTURES_HPP_
#define DPPO_TESTS_PPO_FIXTURES_HPP_

#include <vector>

#include "dppo/policy/gaussian_policy.hpp"
#include "dppo/ppo/returns.hpp"
#include "dppo/rng.hpp"

namespace dppo::testing {

using nn::Vector;

inline policy::NetSpec tiny_spec(std::size_t obs, std::size_t act, std::size_t lstm) {
  policy::NetSpec s;
  s.encoder.proprio_dim = obs;
  s.encoder.trunk_hidden = {4};
  s.lstm_units = lstm;
  s.output_dim = act;
  return s;
}

// Rolls the behavior policy over random observations to build consistent
// windows (carries, means and log-probs all from the same policy).
inline ppo::AdvantageBatch random_batch(const policy::GaussianPolicy& pi,
                                        const policy::ValueFunction& vf, std::size_t windows,
                                        std::size_t K, std::uint64_t seed,
                                        const ppo::PpoConfig& cfg) {
  auto rng = CounterRng::keyed(seed, {0xba7c});
  std::vector<ppo::TrajectorySegment> segs;
  auto pc = pi.initial_carry();
  auto vc = vf.initial_carry();
  for (std::size_t w = 0; w < windows; ++w) {
    ppo::TrajectorySegment s;
    s.policy_carry = pc;
    s.value_carry = vc;
    const std::size_t n = (w % 3 == 2) ? 1 + rng.next_u64() % K : K;
    s.terminal = n < K;
    for (std::size_t t = 0; t <= n; ++t) {
      Vector o(pi.obs_dim());
      for (auto& x : o) x = rng.uniform(-1.0, 1.0);
      s.observations.push_back(o);
      if (t == n) {
        auto vc2 = vc;
        s.values.push_back(s.terminal ? 0.0 : vf.value(o, vc2));
        break;
      }
      s.values.push_back(vf.value(o, vc));
      const auto r = pi.act(o, pc, rng);
      s.actions.push_back(r.action);
      s.log_probs.push_back(r.log_prob);
      s.means.push_back(r.mean);
      s.rewards.push_back(rng.uniform(-1.0, 1.0));
    }
    if (s.terminal) {
      pc = pi.initial_carry();
      vc = vf.initial_carry();
    }
    segs.push_back(std::move(s));
  }
  return ppo::build_batch(std::move(segs), pi.log_std(), cfg);
}

}  // namespace dppo::testing

#endif  // DPPO_TESTS_PPO_FIXTURES_HPP_
