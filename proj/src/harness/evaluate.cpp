#include "dppo/harness/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dppo/binary_io.hpp"
#include "dppo/errors.hpp"
#include "dppo/rng.hpp"

namespace dppo::harness {

using nn::Vector;

namespace {

constexpr std::uint64_t kEvalEpisodes = 0x6576616c;  // "eval"
constexpr std::uint64_t kEvalActions = 0x65616374;

envs::CourseMixture mixture_of(const ExperimentConfig& c) {
  envs::CourseMixture m;
  if (c.env.mixture_types.empty()) {
    m.specs.push_back(c.env.course);
    return m;
  }
  for (auto t : c.env.mixture_types) {
    terrain::CourseSpec s = c.env.course;
    s.type = t;
    m.specs.push_back(s);
  }
  m.weights = c.env.mixture_weights;
  return m;
}

}  // namespace

std::unique_ptr<envs::Environment> make_env(const ExperimentConfig& c) {
  if (c.env.kind == EnvKind::kReacher) return std::make_unique<envs::MemoryReacher>(c.env.reacher);
  return std::make_unique<envs::Hopper>(mixture_of(c), c.env.hopper, c.env.perturbation);
}

std::unique_ptr<envs::Environment> make_hurdle_env(const ExperimentConfig& c, terrain::Range heights,
                                                   const envs::Perturbation& perturb) {
  if (c.env.kind != EnvKind::kHopper) throw ConfigError("hurdle courses need the hopper body");
  envs::CourseMixture m;
  terrain::CourseSpec s = c.env.course;
  s.type = terrain::TerrainType::kHurdles;
  s.difficulty = terrain::DifficultyProfile{};
  s.hurdle_height = heights;
  s.validate();
  m.specs.push_back(s);
  return std::make_unique<envs::Hopper>(m, c.env.hopper, perturb);
}

std::unique_ptr<envs::Environment> make_flat_env(const ExperimentConfig& c,
                                                 const envs::Perturbation& perturb) {
  if (c.env.kind != EnvKind::kHopper) throw ConfigError("flat courses need the hopper body");
  envs::CourseMixture m;
  terrain::CourseSpec s = c.env.course;
  s.type = terrain::TerrainType::kFlat;
  s.difficulty = terrain::DifficultyProfile{};
  m.specs.push_back(s);
  return std::make_unique<envs::Hopper>(m, c.env.hopper, perturb);
}

namespace {

policy::NetSpec base_spec(const ExperimentConfig& c, const envs::Environment& env) {
  policy::NetSpec s;
  s.encoder.proprio_dim = env.proprio_dim();
  s.encoder.extero_dim = env.obs_dim() - env.proprio_dim();
  s.encoder.proprio_hidden = c.network.proprio_hidden;
  if (s.encoder.extero_dim > 0) s.encoder.extero_hidden = c.network.extero_hidden;
  s.encoder.trunk_hidden = c.network.trunk_hidden;
  s.lstm_units = c.network.lstm_units;
  s.forget_bias = c.network.lstm_forget_bias;
  return s;
}

}  // namespace

policy::NetSpec policy_spec(const ExperimentConfig& c, const envs::Environment& env) {
  policy::NetSpec s = base_spec(c, env);
  s.output_dim = env.act_dim();
  s.output_scale = c.network.policy_output_scale;
  return s;
}

policy::NetSpec value_spec(const ExperimentConfig& c, const envs::Environment& env) {
  policy::NetSpec s = base_spec(c, env);
  s.output_dim = 1;
  s.output_scale = 1.0;
  return s;
}

PolicySnapshot snapshot_from_checkpoint(const nn::Checkpoint& ck) {
  if (!ck.has("config")) throw FormatError("checkpoint has no config snapshot");
  const auto& raw = ck.get("config");
  PolicySnapshot s;
  s.config = parse_config(std::string(raw.begin(), raw.end()));
  auto env = make_env(s.config);
  s.policy = policy::GaussianPolicy(policy_spec(s.config, *env), s.config.network.initial_log_std);
  s.policy.unflatten(ck.get_params("theta"));
  ByteReader so(ck.get("obs_stats"));
  s.obs_stats = stats::RunningMoments::read(so);
  ByteReader st(ck.get("state"));
  s.iteration = st.u64();
  return s;
}

PolicySnapshot load_snapshot(const std::string& path) {
  return snapshot_from_checkpoint(nn::Checkpoint::load(path));
}

EvalStats evaluate(const policy::GaussianPolicy& pi, const stats::RunningMoments& obs_stats,
                   envs::Environment& env, const EvalOptions& opt) {
  if (env.obs_dim() != pi.obs_dim() || env.act_dim() != pi.action_dim() ||
      obs_stats.dim() != env.obs_dim()) {
    throw ConfigError("evaluation environment does not match the policy dimensions");
  }
  if (opt.episodes == 0) throw ConfigError("evaluation needs at least one episode");
  EvalStats out;
  for (std::size_t e = 0; e < opt.episodes; ++e) {
    CounterRng rng = CounterRng::keyed(opt.seed, {kEvalActions, e});
    Vector obs = env.reset(derive_key(opt.seed, {kEvalEpisodes, e}));
    policy::Carry carry = pi.initial_carry();
    double ret = 0.0;
    while (true) {
      const Vector z = stats::normalize_obs(obs_stats, obs);
      Vector a = opt.mean_action ? pi.mean(z, carry) : pi.act(z, carry, rng).action;
      envs::StepResult r = env.step(a);
      ret += r.reward;
      obs = std::move(r.obs);
      if (r.done) break;
    }
    out.returns.push_back(ret);
    out.distances.push_back(env.distance());
  }
  std::vector<double> sorted = out.returns;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  out.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(n);
  out.median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  out.min = sorted.front();
  out.max = sorted.back();
  out.mean_distance = std::accumulate(out.distances.begin(), out.distances.end(), 0.0) /
                      static_cast<double>(n);
  return out;
}

EvalStats evaluate(const PolicySnapshot& snap, envs::Environment& env, const EvalOptions& opt) {
  return evaluate(snap.policy, snap.obs_stats, env, opt);
}

}  // namespace dppo::harness
