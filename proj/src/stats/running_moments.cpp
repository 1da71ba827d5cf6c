#include "dppo/stats/running_moments.hpp"

#include <algorithm>
#include <cmath>

#include "dppo/binary_io.hpp"
#include "dppo/errors.hpp"

namespace dppo::stats {

RunningMoments::RunningMoments(std::size_t dim, double epsilon)
    : mean_(dim, 0.0), m2_(dim, 0.0), eps_(epsilon) {}

bool RunningMoments::update(std::span<const double> x) {
  require_shape(x.size() == dim(), "RunningMoments::update: dimension mismatch");
  for (double v : x) {
    if (!std::isfinite(v)) {
      ++rejected_;
      return false;
    }
  }
  count_ += 1.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double d = x[k] - mean_[k];
    mean_[k] += d / count_;
    m2_[k] += d * (x[k] - mean_[k]);
  }
  return true;
}

void RunningMoments::merge(const RunningMoments& other) {
  require_shape(other.dim() == dim(), "RunningMoments::merge: dimension mismatch");
  rejected_ += other.rejected_;
  if (other.count_ == 0.0) return;
  if (count_ == 0.0) {
    count_ = other.count_;
    mean_ = other.mean_;
    m2_ = other.m2_;
    return;
  }
  const double n = count_ + other.count_;
  for (std::size_t k = 0; k < dim(); ++k) {
    const double d = other.mean_[k] - mean_[k];
    mean_[k] += d * (other.count_ / n);
    m2_[k] += other.m2_[k] + d * d * (count_ * other.count_ / n);
  }
  count_ = n;
}

Vector RunningMoments::variance() const {
  Vector v(dim(), 0.0);
  if (count_ > 0.0) {
    for (std::size_t k = 0; k < dim(); ++k) v[k] = std::max(0.0, m2_[k] / count_);
  }
  return v;
}

double RunningMoments::stddev(std::size_t k) const {
  const double var = count_ > 0.0 ? std::max(0.0, m2_[k] / count_) : 0.0;
  return std::max(std::sqrt(var), eps_);
}

Vector RunningMoments::stddev() const {
  Vector s(dim());
  for (std::size_t k = 0; k < dim(); ++k) s[k] = stddev(k);
  return s;
}

void RunningMoments::write(ByteWriter& w) const {
  w.f64(count_);
  w.f64(eps_);
  w.u64(rejected_);
  w.f64_array(mean_);
  w.f64_array(m2_);
}

RunningMoments RunningMoments::read(ByteReader& r) {
  RunningMoments m;
  m.count_ = r.f64();
  m.eps_ = r.f64();
  m.rejected_ = r.u64();
  m.mean_ = r.f64_array();
  m.m2_ = r.f64_array();
  if (m.mean_.size() != m.m2_.size()) throw FormatError("moment vectors differ in size");
  if (!(m.count_ >= 0.0)) throw FormatError("negative moment count");
  return m;
}

RunningMoments update(RunningMoments m, std::span<const double> x) {
  m.update(x);
  return m;
}

RunningMoments merge(RunningMoments global, const StatsDelta& delta) {
  global.merge(delta.moments);
  return global;
}

Vector normalize_obs(const RunningMoments& m, std::span<const double> x, double clip) {
  require_shape(x.size() == m.dim(), "normalize_obs: dimension mismatch");
  Vector out(x.begin(), x.end());
  if (m.count() == 0.0) return out;
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = std::clamp((x[k] - m.mean()[k]) / m.stddev(k), -clip, clip);
  }
  return out;
}

double scale_reward(const RunningMoments& m, double r) {
  if (m.count() == 0.0) return r;
  return r / m.stddev(0);
}

}  // namespace dppo::stats
