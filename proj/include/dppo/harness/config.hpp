#ifndef DPPO_HARNESS_CONFIG_HPP_
#define DPPO_HARNESS_CONFIG_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "dppo/dist/runtime.hpp"
#include "dppo/envs/hopper.hpp"
#include "dppo/envs/memory_reacher.hpp"
#include "dppo/nn/optimizer.hpp"
#include "dppo/ppo/config.hpp"
#include "dppo/terrain/course.hpp"

namespace dppo::harness {

enum class EnvKind { kReacher, kHopper };
std::string to_string(EnvKind k);
EnvKind env_kind_from_string(const std::string& s);

struct NetworkConfig {
  std::vector<std::size_t> proprio_hidden{32};
  std::vector<std::size_t> extero_hidden{32};
  std::vector<std::size_t> trunk_hidden{32};
  std::size_t lstm_units = 0;
  double lstm_forget_bias = 1.0;
  double initial_log_std = -0.5;
  double policy_output_scale = 0.1;
  bool operator==(const NetworkConfig&) const = default;
};

struct EnvConfig {
  EnvKind kind = EnvKind::kReacher;
  envs::ReacherParams reacher;
  envs::HopperParams hopper;
  envs::Perturbation perturbation;
  terrain::CourseSpec course;
  // Per-episode choice among single-type variants of `course`; empty means
  // `course` alone.
  std::vector<terrain::TerrainType> mixture_types;
  std::vector<double> mixture_weights;
  bool operator==(const EnvConfig&) const = default;
};

struct EvalConfig {
  std::size_t every = 0;         // iterations between evaluations; 0 disables
  std::size_t episodes = 10;
  std::uint64_t seed = 1000;
  bool mean_action = false;
  // Validation hurdle courses (stationary, otherwise like `env.course`).
  terrain::Range easy_hurdle_height{0.05, 0.15};
  terrain::Range hard_hurdle_height{0.3, 0.5};
  bool operator==(const EvalConfig&) const = default;
};

struct CurriculumConfig {
  std::vector<std::uint64_t> seeds{1, 2, 3};
  double threshold_fraction = 0.5;
  bool operator==(const CurriculumConfig&) const = default;
};

struct RobustnessConfig {
  std::vector<double> friction{0.5, 1.0, 2.0};
  std::vector<double> rubble{0.0, 0.05};
  std::vector<double> gain{0.7, 1.0, 1.3};
  std::vector<double> incline_deg{-5.0, 0.0, 5.0};
  std::size_t episodes = 20;
  bool operator==(const RobustnessConfig&) const = default;
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::uint64_t seed = 1;
  std::uint64_t iterations = 100;
  std::string output_dir = "out";
  std::size_t checkpoint_every = 10;  // 0: final checkpoint only

  std::size_t workers = 1;
  std::size_t drop_slack = 0;
  dist::DriverMode driver = dist::DriverMode::kDeterministic;
  int kernel_threads = 1;
  std::size_t chunk_windows = 16;
  dist::TimeoutPolicy timeout;

  ppo::PpoConfig ppo;
  nn::OptimizerKind optimizer = nn::OptimizerKind::kAdam;
  NetworkConfig network;
  EnvConfig env;
  EvalConfig eval;
  CurriculumConfig curriculum;
  RobustnessConfig robustness;

  // Re-checks every module constraint; throws ConfigError.
  void validate() const;
  bool operator==(const ExperimentConfig&) const = default;
};

// INI text with sections. Unknown sections or keys, malformed values and
// failed validation all raise ConfigError naming the offending key.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
// Every key, in a fixed order; parse_config(to_ini(c)) == c.
std::string to_ini(const ExperimentConfig& c);

}  // namespace dppo::harness

#endif  // DPPO_HARNESS_CONFIG_HPP_
