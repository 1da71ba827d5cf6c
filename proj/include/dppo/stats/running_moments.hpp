#ifndef DPPO_STATS_RUNNING_MOMENTS_HPP_
#define DPPO_STATS_RUNNING_MOMENTS_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "dppo/nn/param_vector.hpp"

namespace dppo {
class ByteWriter;
class ByteReader;
}  // namespace dppo

namespace dppo::stats {

using nn::Vector;

// Mergeable streaming moments (count, mean, M2 = sum of squared deviations).
class RunningMoments {
 public:
  static constexpr double kDefaultEpsilon = 1e-8;

  RunningMoments() = default;
  explicit RunningMoments(std::size_t dim, double epsilon = kDefaultEpsilon);

  // Welford update. Non-finite inputs are rejected (counted, not applied).
  // Returns false when rejected.
  bool update(std::span<const double> x);
  bool update(double x) { return update(std::span<const double>(&x, 1)); }

  // Chan et al. parallel combination.
  void merge(const RunningMoments& other);

  std::size_t dim() const { return mean_.size(); }
  double count() const { return count_; }
  const Vector& mean() const { return mean_; }
  const Vector& m2() const { return m2_; }
  double epsilon() const { return eps_; }
  std::uint64_t rejected() const { return rejected_; }
  // Population variance (0 when count == 0).
  Vector variance() const;
  // max(sqrt(variance), epsilon) per coordinate.
  Vector stddev() const;
  double stddev(std::size_t k) const;

  void write(ByteWriter& w) const;
  static RunningMoments read(ByteReader& r);

  bool operator==(const RunningMoments&) const = default;

 private:
  double count_ = 0.0;
  Vector mean_;
  Vector m2_;
  double eps_ = kDefaultEpsilon;
  std::uint64_t rejected_ = 0;
};

// Moments of the points a worker observed since its last global sync,
// keyed for idempotent application.
struct StatsDelta {
  std::uint64_t iteration = 0;
  std::uint32_t worker = 0;
  RunningMoments moments;
};

RunningMoments update(RunningMoments m, std::span<const double> x);
RunningMoments merge(RunningMoments global, const StatsDelta& delta);

// (x - mean) / std clipped to [-clip, clip]; identity when count == 0.
Vector normalize_obs(const RunningMoments& m, std::span<const double> x, double clip = 5.0);

// r / std with no centering; identity when no reward has been recorded.
double scale_reward(const RunningMoments& m, double r);

}  // namespace dppo::stats

#endif  // DPPO_STATS_RUNNING_MOMENTS_HPP_
