#include "dppo/harness/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "dppo/errors.hpp"

namespace dppo::harness {
namespace {

using Getter = std::function<std::string(const ExperimentConfig&)>;
using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

struct Field {
  std::string section;
  std::string key;
  Getter get;
  Setter set;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  if (trim(s).empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

double parse_double(const std::string& s) {
  const std::string t = trim(s);
  double v = 0.0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size() || t.empty()) {
    throw ConfigError("'" + s + "' is not a number");
  }
  return v;
}

std::uint64_t parse_u64(const std::string& s) {
  const std::string t = trim(s);
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || p != t.data() + t.size() || t.empty()) {
    throw ConfigError("'" + s + "' is not a nonnegative integer");
  }
  return v;
}

bool parse_bool(const std::string& s) {
  const std::string t = trim(s);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError("'" + s + "' is not a boolean");
}

template <typename T>
std::string join(const std::vector<T>& xs, const std::function<std::string(const T&)>& f) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + f(xs[i]);
  return out;
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  for (const auto& x : split(s)) out.push_back(parse_double(x));
  return out;
}

std::vector<std::size_t> parse_sizes(const std::string& s) {
  std::vector<std::size_t> out;
  for (const auto& x : split(s)) out.push_back(parse_u64(x));
  return out;
}

terrain::Range parse_range(const std::string& s) {
  auto v = parse_doubles(s);
  if (v.size() != 2) throw ConfigError("'" + s + "' is not a range lo,hi");
  return {v[0], v[1]};
}

// Field builders bound to a member selected by a lambda.
template <typename Sel>
Field real(std::string sec, std::string key, Sel sel) {
  return {sec, key, [sel](const ExperimentConfig& c) { return fmt(sel(const_cast<ExperimentConfig&>(c))); },
          [sel](ExperimentConfig& c, const std::string& v) { sel(c) = parse_double(v); }};
}

template <typename Sel>
Field integer(std::string sec, std::string key, Sel sel) {
  return {sec, key,
          [sel](const ExperimentConfig& c) { return std::to_string(sel(const_cast<ExperimentConfig&>(c))); },
          [sel](ExperimentConfig& c, const std::string& v) {
            using T = std::decay_t<decltype(sel(c))>;
            sel(c) = static_cast<T>(parse_u64(v));
          }};
}

template <typename Sel>
Field boolean(std::string sec, std::string key, Sel sel) {
  return {sec, key,
          [sel](const ExperimentConfig& c) { return std::string(sel(const_cast<ExperimentConfig&>(c)) ? "true" : "false"); },
          [sel](ExperimentConfig& c, const std::string& v) { sel(c) = parse_bool(v); }};
}

template <typename Sel>
Field range(std::string sec, std::string key, Sel sel) {
  return {sec, key,
          [sel](const ExperimentConfig& c) {
            const terrain::Range& r = sel(const_cast<ExperimentConfig&>(c));
            return fmt(r.lo) + "," + fmt(r.hi);
          },
          [sel](ExperimentConfig& c, const std::string& v) { sel(c) = parse_range(v); }};
}

template <typename Sel>
Field reals(std::string sec, std::string key, Sel sel) {
  return {sec, key,
          [sel](const ExperimentConfig& c) {
            return join<double>(sel(const_cast<ExperimentConfig&>(c)), [](const double& x) { return fmt(x); });
          },
          [sel](ExperimentConfig& c, const std::string& v) { sel(c) = parse_doubles(v); }};
}

template <typename Sel>
Field sizes(std::string sec, std::string key, Sel sel) {
  return {sec, key,
          [sel](const ExperimentConfig& c) {
            return join<std::size_t>(sel(const_cast<ExperimentConfig&>(c)),
                                     [](const std::size_t& x) { return std::to_string(x); });
          },
          [sel](ExperimentConfig& c, const std::string& v) { sel(c) = parse_sizes(v); }};
}

#define SEL(expr) [](ExperimentConfig& c) -> auto& { return c.expr; }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back({"experiment", "name", [](const ExperimentConfig& c) { return c.name; },
                 [](ExperimentConfig& c, const std::string& v) { c.name = trim(v); }});
    f.push_back(integer("experiment", "seed", SEL(seed)));
    f.push_back(integer("experiment", "iterations", SEL(iterations)));
    f.push_back({"experiment", "output_dir", [](const ExperimentConfig& c) { return c.output_dir; },
                 [](ExperimentConfig& c, const std::string& v) { c.output_dir = trim(v); }});
    f.push_back(integer("experiment", "checkpoint_every", SEL(checkpoint_every)));

    f.push_back(integer("distributed", "workers", SEL(workers)));
    f.push_back(integer("distributed", "drop_slack", SEL(drop_slack)));
    f.push_back({"distributed", "driver", [](const ExperimentConfig& c) { return dist::to_string(c.driver); },
                 [](ExperimentConfig& c, const std::string& v) { c.driver = dist::driver_from_string(trim(v)); }});
    f.push_back(integer("distributed", "kernel_threads", SEL(kernel_threads)));
    f.push_back(integer("distributed", "chunk_windows", SEL(chunk_windows)));
    f.push_back(real("distributed", "min_round_timeout", SEL(timeout.min_seconds)));
    f.push_back(real("distributed", "timeout_median_factor", SEL(timeout.median_factor)));
    f.push_back(real("distributed", "initial_round_timeout", SEL(timeout.initial_seconds)));

    f.push_back(real("ppo", "gamma", SEL(ppo.gamma)));
    f.push_back(integer("ppo", "K", SEL(ppo.K)));
    f.push_back(integer("ppo", "M", SEL(ppo.M)));
    f.push_back(integer("ppo", "B", SEL(ppo.B)));
    f.push_back(integer("ppo", "T", SEL(ppo.T)));
    f.push_back(real("ppo", "lambda0", SEL(ppo.lambda0)));
    f.push_back(real("ppo", "kl_target", SEL(ppo.kl_target)));
    f.push_back(real("ppo", "alpha", SEL(ppo.alpha)));
    f.push_back(real("ppo", "beta_high", SEL(ppo.beta_high)));
    f.push_back(real("ppo", "beta_low", SEL(ppo.beta_low)));
    f.push_back(real("ppo", "xi", SEL(ppo.xi)));
    f.push_back(real("ppo", "lambda_min", SEL(ppo.lambda_min)));
    f.push_back(real("ppo", "lambda_max", SEL(ppo.lambda_max)));
    f.push_back(real("ppo", "lr_policy", SEL(ppo.lr_policy)));
    f.push_back(real("ppo", "lr_baseline", SEL(ppo.lr_baseline)));
    f.push_back(real("ppo", "early_stop_factor", SEL(ppo.early_stop_factor)));
    f.push_back(real("ppo", "max_log_ratio", SEL(ppo.max_log_ratio)));
    f.push_back(boolean("ppo", "normalize_advantages", SEL(ppo.normalize_advantages)));
    f.push_back({"ppo", "bootstrap", [](const ExperimentConfig& c) { return ppo::to_string(c.ppo.bootstrap); },
                 [](ExperimentConfig& c, const std::string& v) { c.ppo.bootstrap = ppo::bootstrap_from_string(trim(v)); }});
    f.push_back({"ppo", "alpha_divisor", [](const ExperimentConfig& c) { return ppo::to_string(c.ppo.alpha_divisor); },
                 [](ExperimentConfig& c, const std::string& v) {
                   c.ppo.alpha_divisor = ppo::alpha_divisor_from_string(trim(v));
                 }});
    f.push_back({"ppo", "optimizer", [](const ExperimentConfig& c) { return nn::to_string(c.optimizer); },
                 [](ExperimentConfig& c, const std::string& v) { c.optimizer = nn::optimizer_from_string(trim(v)); }});

    f.push_back(sizes("network", "proprio_hidden", SEL(network.proprio_hidden)));
    f.push_back(sizes("network", "extero_hidden", SEL(network.extero_hidden)));
    f.push_back(sizes("network", "trunk_hidden", SEL(network.trunk_hidden)));
    f.push_back(integer("network", "lstm_units", SEL(network.lstm_units)));
    f.push_back(real("network", "lstm_forget_bias", SEL(network.lstm_forget_bias)));
    f.push_back(real("network", "initial_log_std", SEL(network.initial_log_std)));
    f.push_back(real("network", "policy_output_scale", SEL(network.policy_output_scale)));

    f.push_back({"env", "kind", [](const ExperimentConfig& c) { return to_string(c.env.kind); },
                 [](ExperimentConfig& c, const std::string& v) { c.env.kind = env_kind_from_string(trim(v)); }});
    f.push_back(real("env", "reacher_link1", SEL(env.reacher.link1)));
    f.push_back(real("env", "reacher_link2", SEL(env.reacher.link2)));
    f.push_back(real("env", "reacher_dt", SEL(env.reacher.dt)));
    f.push_back(real("env", "reacher_gain", SEL(env.reacher.gain)));
    f.push_back(real("env", "reacher_damping", SEL(env.reacher.damping)));
    f.push_back(integer("env", "reacher_episode_length", SEL(env.reacher.episode_length)));
    f.push_back(integer("env", "reacher_visible_steps", SEL(env.reacher.visible_steps)));
    f.push_back(boolean("env", "reacher_hide_target", SEL(env.reacher.hide_target)));
    f.push_back(boolean("env", "reacher_observe_end_effector", SEL(env.reacher.observe_end_effector)));
    f.push_back(real("env", "hopper_dt", SEL(env.hopper.dt)));
    f.push_back(integer("env", "hopper_substeps", SEL(env.hopper.substeps)));
    f.push_back(real("env", "hopper_gravity", SEL(env.hopper.gravity)));
    f.push_back(real("env", "hopper_friction", SEL(env.hopper.friction)));
    f.push_back(real("env", "hopper_drive", SEL(env.hopper.drive)));
    f.push_back(real("env", "hopper_air_drive", SEL(env.hopper.air_drive)));
    f.push_back(real("env", "hopper_drag", SEL(env.hopper.drag)));
    f.push_back(real("env", "hopper_leg_speed", SEL(env.hopper.leg_speed)));
    f.push_back(real("env", "hopper_leg_min", SEL(env.hopper.leg_min)));
    f.push_back(real("env", "hopper_leg_max", SEL(env.hopper.leg_max)));
    f.push_back(real("env", "hopper_leg_rest", SEL(env.hopper.leg_rest)));
    f.push_back(real("env", "hopper_torque", SEL(env.hopper.torque)));
    f.push_back(real("env", "hopper_inertia", SEL(env.hopper.inertia)));
    f.push_back(real("env", "hopper_angular_damping", SEL(env.hopper.angular_damping)));
    f.push_back(real("env", "hopper_step_tolerance", SEL(env.hopper.step_tolerance)));
    f.push_back(real("env", "hopper_spawn_x", SEL(env.hopper.spawn_x)));
    f.push_back(integer("env", "hopper_max_steps", SEL(env.hopper.max_steps)));
    f.push_back(real("env", "perturb_friction", SEL(env.perturbation.friction)));
    f.push_back(real("env", "perturb_rubble", SEL(env.perturbation.rubble)));
    f.push_back(real("env", "perturb_gain", SEL(env.perturbation.gain)));
    f.push_back(real("env", "perturb_incline", SEL(env.perturbation.incline)));

    f.push_back({"course", "type", [](const ExperimentConfig& c) { return terrain::to_string(c.env.course.type); },
                 [](ExperimentConfig& c, const std::string& v) {
                   c.env.course.type = terrain::terrain_type_from_string(trim(v));
                 }});
    f.push_back(real("course", "length", SEL(env.course.length)));
    f.push_back(real("course", "pixel", SEL(env.course.pixel)));
    f.push_back(real("course", "spawn", SEL(env.course.spawn)));
    f.push_back(range("course", "spacing", SEL(env.course.spacing)));
    f.push_back(range("course", "hurdle_height", SEL(env.course.hurdle_height)));
    f.push_back(range("course", "hurdle_width", SEL(env.course.hurdle_width)));
    f.push_back(range("course", "gap_width", SEL(env.course.gap_width)));
    f.push_back(range("course", "platform_height", SEL(env.course.platform_height)));
    f.push_back(range("course", "platform_length", SEL(env.course.platform_length)));
    f.push_back(range("course", "variable_amplitude", SEL(env.course.variable_amplitude)));
    f.push_back(range("course", "variable_feature", SEL(env.course.variable_feature)));
    f.push_back(boolean("course", "curriculum", SEL(env.course.difficulty.curriculum)));
    f.push_back(real("course", "difficulty_start", SEL(env.course.difficulty.start)));
    f.push_back(real("course", "difficulty_end", SEL(env.course.difficulty.end)));
    f.push_back(real("course", "difficulty_spread", SEL(env.course.difficulty.spread)));
    f.push_back({"course", "mixture_types",
                 [](const ExperimentConfig& c) {
                   return join<terrain::TerrainType>(c.env.mixture_types, [](const terrain::TerrainType& t) {
                     return terrain::to_string(t);
                   });
                 },
                 [](ExperimentConfig& c, const std::string& v) {
                   c.env.mixture_types.clear();
                   for (const auto& s : split(v)) c.env.mixture_types.push_back(terrain::terrain_type_from_string(s));
                 }});
    f.push_back(reals("course", "mixture_weights", SEL(env.mixture_weights)));

    f.push_back(integer("eval", "every", SEL(eval.every)));
    f.push_back(integer("eval", "episodes", SEL(eval.episodes)));
    f.push_back(integer("eval", "seed", SEL(eval.seed)));
    f.push_back(boolean("eval", "mean_action", SEL(eval.mean_action)));
    f.push_back(range("eval", "easy_hurdle_height", SEL(eval.easy_hurdle_height)));
    f.push_back(range("eval", "hard_hurdle_height", SEL(eval.hard_hurdle_height)));

    f.push_back({"curriculum", "seeds",
                 [](const ExperimentConfig& c) {
                   return join<std::uint64_t>(c.curriculum.seeds,
                                              [](const std::uint64_t& s) { return std::to_string(s); });
                 },
                 [](ExperimentConfig& c, const std::string& v) {
                   c.curriculum.seeds.clear();
                   for (const auto& s : split(v)) c.curriculum.seeds.push_back(parse_u64(s));
                 }});
    f.push_back(real("curriculum", "threshold_fraction", SEL(curriculum.threshold_fraction)));

    f.push_back(reals("robustness", "friction", SEL(robustness.friction)));
    f.push_back(reals("robustness", "rubble", SEL(robustness.rubble)));
    f.push_back(reals("robustness", "gain", SEL(robustness.gain)));
    f.push_back(reals("robustness", "incline_deg", SEL(robustness.incline_deg)));
    f.push_back(integer("robustness", "episodes", SEL(robustness.episodes)));
    return f;
  }();
  return table;
}

#undef SEL

}  // namespace

std::string to_string(EnvKind k) { return k == EnvKind::kReacher ? "reacher" : "hopper"; }

EnvKind env_kind_from_string(const std::string& s) {
  if (s == "reacher") return EnvKind::kReacher;
  if (s == "hopper") return EnvKind::kHopper;
  throw ConfigError("unknown environment kind '" + s + "'");
}

void ExperimentConfig::validate() const {
  ppo.validate();
  if (workers == 0) throw ConfigError("distributed.workers must be at least 1");
  if (drop_slack >= workers) throw ConfigError("distributed.drop_slack must be smaller than workers");
  if (kernel_threads < 1) throw ConfigError("distributed.kernel_threads must be at least 1");
  if (chunk_windows == 0) throw ConfigError("distributed.chunk_windows must be positive");
  if (!(timeout.min_seconds > 0) || !(timeout.median_factor > 0) || !(timeout.initial_seconds > 0)) {
    throw ConfigError("distributed timeouts must be positive");
  }
  if (output_dir.empty()) throw ConfigError("experiment.output_dir must not be empty");
  if (!(network.policy_output_scale > 0)) throw ConfigError("network.policy_output_scale must be positive");
  for (auto h : network.trunk_hidden) {
    if (h == 0) throw ConfigError("network layer sizes must be positive");
  }
  for (auto h : network.proprio_hidden) {
    if (h == 0) throw ConfigError("network layer sizes must be positive");
  }
  for (auto h : network.extero_hidden) {
    if (h == 0) throw ConfigError("network layer sizes must be positive");
  }
  const auto& r = env.reacher;
  if (!(r.dt > 0) || !(r.link1 > 0) || !(r.link2 > 0) || r.episode_length == 0 ||
      r.visible_steps >= r.episode_length) {
    throw ConfigError("invalid reacher parameters");
  }
  const auto& h = env.hopper;
  if (!(h.dt > 0) || h.substeps == 0 || !(h.leg_min > 0) || !(h.leg_min < h.leg_max) ||
      h.leg_rest < h.leg_min || h.leg_rest > h.leg_max || h.max_steps == 0 || !(h.inertia > 0)) {
    throw ConfigError("invalid hopper parameters");
  }
  if (!(env.perturbation.friction >= 0) || !(env.perturbation.rubble >= 0) || !(env.perturbation.gain >= 0)) {
    throw ConfigError("perturbations must be nonnegative");
  }
  env.course.validate();
  if (!env.mixture_weights.empty() && env.mixture_weights.size() != env.mixture_types.size()) {
    throw ConfigError("course.mixture_weights must match course.mixture_types");
  }
  for (double w : env.mixture_weights) {
    if (!(w >= 0)) throw ConfigError("course.mixture_weights must be nonnegative");
  }
  if (eval.episodes == 0) throw ConfigError("eval.episodes must be positive");
  for (const auto* rr : {&eval.easy_hurdle_height, &eval.hard_hurdle_height}) {
    if (!(rr->lo <= rr->hi) || rr->lo < 0) throw ConfigError("eval hurdle ranges must be ordered");
  }
  if (curriculum.seeds.empty()) throw ConfigError("curriculum.seeds must not be empty");
  if (!(curriculum.threshold_fraction > 0 && curriculum.threshold_fraction <= 1)) {
    throw ConfigError("curriculum.threshold_fraction must be in (0, 1]");
  }
  if (robustness.episodes == 0) throw ConfigError("robustness.episodes must be positive");
}

ExperimentConfig parse_config(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.what());
  }
  std::map<std::string, const Field*> index;
  std::set<std::string> sections;
  for (const auto& f : fields()) {
    index[f.section + "." + f.key] = &f;
    sections.insert(f.section);
  }
  ExperimentConfig c;
  for (const auto& [sec, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ConfigError("key '" + sec + "' must be inside a section");
    }
    if (!sections.count(sec)) throw ConfigError("unknown config section [" + sec + "]");
    for (const auto& [key, value] : body) {
      const std::string name = sec + "." + key;
      auto it = index.find(name);
      if (it == index.end()) throw ConfigError("unknown config key '" + name + "'");
      try {
        it->second->set(c, value.data());
      } catch (const ConfigError& e) {
        throw ConfigError(name + ": " + e.what());
      }
    }
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (f == nullptr) throw ConfigError("cannot open config '" + path + "'");
  std::string text;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof(buf), f)) > 0) text.append(buf, n);
  std::fclose(f);
  return parse_config(text);
}

std::string to_ini(const ExperimentConfig& c) {
  std::string out;
  std::string section;
  for (const auto& f : fields()) {
    if (f.section != section) {
      out += (section.empty() ? "" : "\n") + std::string("[") + f.section + "]\n";
      section = f.section;
    }
    out += f.key + " = " + f.get(c) + "\n";
  }
  return out;
}

}  // namespace dppo::harness
