#ifndef DPPO_HARNESS_METRICS_HPP_
#define DPPO_HARNESS_METRICS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dppo/dist/chief.hpp"

namespace dppo::harness {

// One row per training iteration. Evaluation columns are empty on
// iterations without an evaluation.
struct MetricsRow {
  std::uint64_t iteration = 0;
  double mean_return = 0.0;
  double median_return = 0.0;
  double mean_length = 0.0;
  std::uint64_t episodes = 0;
  double mean_kl = 0.0;
  double lambda = 0.0;
  std::uint32_t early_stops = 0;
  std::uint64_t excluded = 0;
  std::uint64_t env_steps = 0;
  double steps_per_second = 0.0;   // env steps over the collection phase
  double wall_seconds = 0.0;       // whole iteration
  std::optional<double> eval_train;
  std::optional<double> eval_easy;
  std::optional<double> eval_hard;
  bool operator==(const MetricsRow&) const = default;
};

// Fixed column order of the metrics CSV.
const std::vector<std::string>& metrics_columns();
std::string metrics_header();
std::string format_row(const MetricsRow& r);

MetricsRow make_row(const dist::IterationSummary& s, double wall_seconds);

// Parses a metrics CSV; throws FormatError naming the line on bad input.
std::vector<MetricsRow> parse_metrics(const std::string& csv);

// Append-only writer. Opening an existing file checks its header and keeps
// its rows; rows for iterations already present are skipped, so a resumed
// run never rewrites history.
class MetricsWriter {
 public:
  explicit MetricsWriter(std::string path);
  void append(const MetricsRow& r);
  const std::string& path() const { return path_; }
  std::optional<std::uint64_t> last_iteration() const { return last_; }

 private:
  std::string path_;
  std::optional<std::uint64_t> last_;
};

}  // namespace dppo::harness

#endif  // DPPO_HARNESS_METRICS_HPP_
