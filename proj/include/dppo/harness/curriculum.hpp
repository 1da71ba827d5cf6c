#ifndef DPPO_HARNESS_CURRICULUM_HPP_
#define DPPO_HARNESS_CURRICULUM_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dppo/harness/config.hpp"
#include "dppo/nn/checkpoint.hpp"

namespace dppo::harness {

enum class Arm { kStationary, kCurriculum };
std::string to_string(Arm a);

// The training config of one arm: hurdle course with stationary or
// curriculum difficulty, experiment seed `seed`, output under `base`.
ExperimentConfig arm_config(const ExperimentConfig& c, Arm arm, std::uint64_t seed);

struct CurveRun {
  Arm arm = Arm::kStationary;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> iterations;  // completed iterations at each evaluation
  std::vector<double> easy;
  std::vector<double> hard;
  double initial_easy = 0.0;  // untrained policy, same seeds
  double initial_hard = 0.0;
  std::uint64_t to_threshold_easy = 0;  // censored at N + 1
  std::uint64_t to_threshold_hard = 0;
  nn::Checkpoint final_state;
};

struct CurriculumReport {
  std::vector<CurveRun> runs;  // seeds in order, stationary before curriculum
  std::uint64_t iterations = 0;
  double threshold_fraction = 0.5;
  double threshold_easy = 0.0;
  double threshold_hard = 0.0;
  double median_stationary_easy = 0.0;
  double median_curriculum_easy = 0.0;
  double median_stationary_hard = 0.0;
  double median_curriculum_hard = 0.0;
};

// Threshold on one course: base + fraction * (best - base), with base the
// mean untrained return and best the highest evaluation of any run. Fills
// the thresholds, per-run iteration counts and medians of `r`.
void score(CurriculumReport& r);

struct CurriculumOptions {
  bool write_files = true;
  bool reuse_completed = false;  // skip arms already finished on disk
  std::function<void(const std::string&)> log;
};

// Trains both arms for every configured seed and evaluates them on the
// shared easy and hard validation courses every `eval.every` iterations.
// Writes report.json, curves.csv and two SVG charts under output_dir.
CurriculumReport curriculum_experiment(const ExperimentConfig& c, const CurriculumOptions& opt = {});

std::string report_json(const CurriculumReport& r);
std::string curves_csv(const CurriculumReport& r);
std::string curves_svg(const CurriculumReport& r, bool hard);

double median(std::vector<double> xs);

}  // namespace dppo::harness

#endif  // DPPO_HARNESS_CURRICULUM_HPP_
