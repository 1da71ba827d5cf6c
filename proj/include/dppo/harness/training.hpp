#ifndef DPPO_HARNESS_TRAINING_HPP_
#define DPPO_HARNESS_TRAINING_HPP_

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dppo/dist/chief.hpp"
#include "dppo/harness/config.hpp"
#include "dppo/harness/metrics.hpp"

namespace dppo::harness {

dist::TrainingSetup make_setup(const ExperimentConfig& c);

// Chief checkpoint plus the config snapshot it was trained with.
nn::Checkpoint training_checkpoint(const dist::Chief& chief, const ExperimentConfig& c);

struct TrainingOptions {
  std::optional<std::string> resume;  // checkpoint path
  std::function<void(const MetricsRow&)> on_row;
  bool write_files = true;            // false: keep everything in memory
};

struct TrainingOutcome {
  std::vector<MetricsRow> rows;       // rows produced by this call
  std::vector<dist::IterationSummary> summaries;
  std::string final_checkpoint;       // path, empty when not writing files
  std::string metrics_path;
  nn::Checkpoint final_state;
};

// Runs the configured iterations, writing metrics rows as they complete and
// checkpoints every `checkpoint_every` iterations plus a final one. On an
// error the last completed iteration is checkpointed and an error report
// written before the exception propagates.
TrainingOutcome run_training(const ExperimentConfig& c, const TrainingOptions& opt = {});

std::string checkpoint_name(std::uint64_t iteration);

// A finished run of exactly `c` under c.output_dir (final.ckpt whose config
// snapshot equals `c`), with its metrics rows; nullopt otherwise.
std::optional<TrainingOutcome> load_completed(const ExperimentConfig& c);

}  // namespace dppo::harness

#endif  // DPPO_HARNESS_TRAINING_HPP_
