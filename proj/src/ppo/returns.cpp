#include "dppo/ppo/returns.hpp"

#include <cmath>

#include "dppo/errors.hpp"

namespace dppo::ppo {

void TrajectorySegment::check(std::size_t K) const {
  const std::size_t n = length();
  require_shape(n >= 1, "segment is empty");
  require_shape(n <= K, "segment longer than the window length");
  require_shape(observations.size() == n + 1, "segment needs n + 1 observations");
  require_shape(actions.size() == n && log_probs.size() == n && means.size() == n,
                "segment actions, log-probs and means need n entries");
  require_shape(values.size() == n + 1, "segment needs n + 1 values");
}

KStepResult k_step_returns(const TrajectorySegment& seg, double gamma, std::size_t K,
                           BootstrapExponent e) {
  if (K == 0) throw ConfigError("k_step_returns: K must be at least 1");
  const std::size_t n = seg.length();
  require_shape(n <= K, "k_step_returns: segment longer than K");
  require_shape(seg.values.size() == n + 1, "k_step_returns: segment needs n + 1 values");
  Vector pw(n + 1);
  pw[0] = 1.0;
  for (std::size_t k = 1; k <= n; ++k) pw[k] = pw[k - 1] * gamma;
  KStepResult out;
  out.returns.resize(n);
  out.advantages.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    double acc = 0.0;
    for (std::size_t u = t; u < n; ++u) acc += pw[u - t] * seg.rewards[u];
    if (!seg.terminal) {
      std::size_t k = n - t;
      if (e == BootstrapExponent::kStepsMinusOne) k -= 1;
      acc += pw[k] * seg.values[n];
    }
    out.returns[t] = acc;
    out.advantages[t] = acc - seg.values[t];
  }
  return out;
}

std::size_t AdvantageBatch::sample_count() const {
  std::size_t n = 0;
  for (const auto& a : advantages) n += a.size();
  return n;
}

AdvantageBatch build_batch(std::vector<TrajectorySegment> segments, Vector behavior_log_std,
                           const PpoConfig& cfg) {
  AdvantageBatch b;
  b.returns.reserve(segments.size());
  b.advantages.reserve(segments.size());
  for (const auto& s : segments) {
    s.check(cfg.K);
    auto r = k_step_returns(s, cfg.gamma, cfg.K, cfg.bootstrap);
    b.returns.push_back(std::move(r.returns));
    b.advantages.push_back(std::move(r.advantages));
  }
  b.segments = std::move(segments);
  b.behavior_log_std = std::move(behavior_log_std);
  return b;
}

AdvantageBatch normalize_advantages(AdvantageBatch batch) {
  const std::size_t n = batch.sample_count();
  if (n == 0) throw ConfigError("normalize_advantages: empty batch");
  double mean = 0.0;
  for (const auto& a : batch.advantages) {
    for (double v : a) mean += v;
  }
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (const auto& a : batch.advantages) {
    for (double v : a) var += (v - mean) * (v - mean);
  }
  var /= static_cast<double>(n);
  const double sd = std::sqrt(var);
  const bool degenerate = n == 1 || !(sd > 1e-8);
  for (auto& a : batch.advantages) {
    for (double& v : a) v = degenerate ? 0.0 : (v - mean) / sd;
  }
  batch.normalized = true;
  return batch;
}

}  // namespace dppo::ppo
