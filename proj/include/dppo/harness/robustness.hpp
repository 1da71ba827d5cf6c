#ifndef DPPO_HARNESS_ROBUSTNESS_HPP_
#define DPPO_HARNESS_ROBUSTNESS_HPP_

#include <string>
#include <vector>

#include "dppo/envs/hopper.hpp"
#include "dppo/harness/config.hpp"
#include "dppo/harness/evaluate.hpp"

namespace dppo::harness {

struct RobustnessSetting {
  std::string name;
  envs::Perturbation perturbation;
  bool identity = false;
};

// The unperturbed setting first, then each grid value that differs from the
// identity, varied one factor at a time.
std::vector<RobustnessSetting> robustness_grid(const RobustnessConfig& c);

struct RobustnessRow {
  RobustnessSetting setting;
  double hurdle_return = 0.0;  // mean over the hurdle-trained policies
  double flat_return = 0.0;
  double hurdle_normalized = 0.0;
  double flat_normalized = 0.0;
};

struct RobustnessReport {
  std::vector<RobustnessRow> rows;
  std::size_t perturbed = 0;
  std::size_t hurdle_wins = 0;  // perturbed settings with hurdle >= flat
  double win_fraction() const {
    return perturbed ? static_cast<double>(hurdle_wins) / static_cast<double>(perturbed) : 0.0;
  }
};

// Per-setting normalization: both returns divided by the larger one when it
// is positive, otherwise by the larger magnitude.
void normalize(RobustnessRow& row);

// Evaluates each policy group on flat courses under every setting of the
// grid. Groups are averaged per setting. Throws ConfigError when the groups
// are empty or use different bodies.
RobustnessReport robustness_suite(const std::vector<PolicySnapshot>& hurdle,
                                  const std::vector<PolicySnapshot>& flat, const RobustnessConfig& grid,
                                  const EvalOptions& eo);

std::string robustness_table(const RobustnessReport& r);  // CSV
std::string robustness_svg(const RobustnessReport& r);

}  // namespace dppo::harness

#endif  // DPPO_HARNESS_ROBUSTNESS_HPP_
