#include "dppo/ppo/objective.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>

#include "dppo/errors.hpp"
#include "dppo/policy/gaussian.hpp"

namespace dppo::ppo {
namespace {

using policy::GaussianPolicy;
using policy::SequenceNet;
using policy::ValueFunction;

std::span<const Vector> inputs_of(const TrajectorySegment& s) {
  return std::span<const Vector>(s.observations).first(s.length());
}

// Forward state of one window under the current policy.
struct PolicyWindow {
  SequenceNet::WindowTape tape;
  std::vector<Vector> means;
  Vector ratio;          // 0 for excluded samples
  std::vector<char> keep;
  double surrogate = 0.0;
  double kl = 0.0;
  std::size_t included = 0;
  std::size_t excluded = 0;
};

void forward_policy_window(const GaussianPolicy& pi, const AdvantageBatch& batch, std::size_t w,
                           double max_log_ratio, PolicyWindow& out) {
  const auto& seg = batch.segments[w];
  const auto& adv = batch.advantages[w];
  pi.net().forward_window(inputs_of(seg), seg.policy_carry, out.tape, out.means);
  const std::size_t n = seg.length();
  out.ratio.assign(n, 0.0);
  out.keep.assign(n, 0);
  out.surrogate = out.kl = 0.0;
  out.included = out.excluded = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double lp = policy::gaussian_log_prob(out.means[t], pi.log_std(), seg.actions[t]);
    const double d = lp - seg.log_probs[t];
    if (!(std::abs(d) <= max_log_ratio)) {
      ++out.excluded;
      continue;
    }
    out.keep[t] = 1;
    ++out.included;
    out.ratio[t] = std::exp(d);
    out.surrogate += out.ratio[t] * adv[t];
    out.kl += policy::kl_diag_gaussian_log(seg.means[t], batch.behavior_log_std, out.means[t],
                                           pi.log_std());
  }
}

// Accumulates dJ/dtheta of one window into grad = [net..., log_std].
void backward_policy_window(const GaussianPolicy& pi, const AdvantageBatch& batch,
                            std::size_t w, const PolicyWindow& win, double inv_n, double c,
                            std::span<double> grad) {
  const auto& seg = batch.segments[w];
  const auto& adv = batch.advantages[w];
  const std::size_t n = seg.length();
  const std::size_t dim = pi.action_dim();
  const std::size_t np = pi.net().param_count();
  std::span<double> g_ls = grad.subspan(np, dim);
  std::vector<Vector> d_means(n, Vector(dim, 0.0));
  for (std::size_t t = 0; t < n; ++t) {
    if (!win.keep[t]) continue;
    policy::gaussian_log_prob_grad(win.means[t], pi.log_std(), seg.actions[t],
                                   win.ratio[t] * adv[t] * inv_n, d_means[t], g_ls);
    policy::kl_diag_gaussian_log_grad_q(seg.means[t], batch.behavior_log_std, win.means[t],
                                        pi.log_std(), -c * inv_n, d_means[t], g_ls);
  }
  pi.net().backward_window(win.tape, d_means, grad.first(np));
}

void check_batch(const GaussianPolicy& pi, const AdvantageBatch& batch) {
  require_shape(batch.advantages.size() == batch.segments.size() &&
                    batch.returns.size() == batch.segments.size(),
                "advantage batch is inconsistent");
  require_shape(batch.behavior_log_std.size() == pi.action_dim(),
                "behavior log-std has the wrong dimension");
}

double penalty_coef(double lambda, double xi, double kl, double kl_target) {
  return lambda + 2.0 * xi * std::max(0.0, kl - 2.0 * kl_target);
}

void finish(PolicyLoss& r, double lambda, double xi, double kl_target) {
  const double excess = std::max(0.0, r.kl - 2.0 * kl_target);
  r.objective = r.surrogate - lambda * r.kl - xi * excess * excess;
}

// Runs fn(chunk) for every chunk on up to `threads` threads and rethrows the
// first exception.
template <class Fn>
void for_each_chunk(std::size_t chunks, int threads, Fn&& fn) {
  std::exception_ptr err;
  std::mutex mu;
#pragma omp parallel for schedule(static) num_threads(std::max(1, threads)) if (threads > 1)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
    try {
      fn(static_cast<std::size_t>(c));
    } catch (...) {
      std::lock_guard<std::mutex> lk(mu);
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
}

}  // namespace

PolicyLoss ppo_objective(const GaussianPolicy& pi, const AdvantageBatch& batch, double lambda,
                         double xi, double kl_target, double max_log_ratio,
                         const KernelOptions& opt) {
  check_batch(pi, batch);
  const std::size_t nw = batch.segments.size();
  const std::size_t cw = std::max<std::size_t>(1, opt.chunk_windows);
  const std::size_t chunks = (nw + cw - 1) / cw;
  std::vector<PolicyWindow> wins(nw);
  std::vector<PolicyLoss> part(chunks);
  for_each_chunk(chunks, opt.threads, [&](std::size_t c) {
    for (std::size_t w = c * cw; w < std::min(nw, (c + 1) * cw); ++w) {
      forward_policy_window(pi, batch, w, max_log_ratio, wins[w]);
      part[c].surrogate += wins[w].surrogate;
      part[c].kl += wins[w].kl;
      part[c].included += wins[w].included;
      part[c].excluded += wins[w].excluded;
    }
  });
  PolicyLoss r;
  for (const auto& p : part) {
    r.surrogate += p.surrogate;
    r.kl += p.kl;
    r.included += p.included;
    r.excluded += p.excluded;
  }
  r.grad.assign(pi.param_count(), 0.0);
  if (r.included == 0) return r;
  const double inv_n = 1.0 / static_cast<double>(r.included);
  r.surrogate *= inv_n;
  r.kl *= inv_n;
  finish(r, lambda, xi, kl_target);
  const double c = penalty_coef(lambda, xi, r.kl, kl_target);
  std::vector<Vector> grads(chunks);
  for_each_chunk(chunks, opt.threads, [&](std::size_t ch) {
    grads[ch].assign(pi.param_count(), 0.0);
    for (std::size_t w = ch * cw; w < std::min(nw, (ch + 1) * cw); ++w) {
      backward_policy_window(pi, batch, w, wins[w], inv_n, c, grads[ch]);
    }
  });
  for (const auto& g : grads) {
    for (std::size_t i = 0; i < g.size(); ++i) r.grad[i] += g[i];
  }
  return r;
}

PolicyLoss ppo_objective_serial(const GaussianPolicy& pi, const AdvantageBatch& batch,
                                double lambda, double xi, double kl_target,
                                double max_log_ratio) {
  check_batch(pi, batch);
  PolicyLoss r;
  std::vector<PolicyWindow> wins(batch.segments.size());
  for (std::size_t w = 0; w < wins.size(); ++w) {
    forward_policy_window(pi, batch, w, max_log_ratio, wins[w]);
    r.surrogate += wins[w].surrogate;
    r.kl += wins[w].kl;
    r.included += wins[w].included;
    r.excluded += wins[w].excluded;
  }
  r.grad.assign(pi.param_count(), 0.0);
  if (r.included == 0) return r;
  const double inv_n = 1.0 / static_cast<double>(r.included);
  r.surrogate *= inv_n;
  r.kl *= inv_n;
  finish(r, lambda, xi, kl_target);
  const double c = penalty_coef(lambda, xi, r.kl, kl_target);
  for (std::size_t w = 0; w < wins.size(); ++w) {
    backward_policy_window(pi, batch, w, wins[w], inv_n, c, r.grad);
  }
  return r;
}

namespace {

struct ValueWindow {
  SequenceNet::WindowTape tape;
  std::vector<Vector> out;
  double sq = 0.0;
};

void forward_value_window(const ValueFunction& vf, const AdvantageBatch& batch, std::size_t w,
                          ValueWindow& win) {
  const auto& seg = batch.segments[w];
  vf.net().forward_window(inputs_of(seg), seg.value_carry, win.tape, win.out);
  win.sq = 0.0;
  for (std::size_t t = 0; t < seg.length(); ++t) {
    const double d = win.out[t][0] - batch.returns[w][t];
    win.sq += d * d;
  }
}

void backward_value_window(const ValueFunction& vf, const AdvantageBatch& batch, std::size_t w,
                           const ValueWindow& win, double inv_n, std::span<double> grad) {
  const auto& seg = batch.segments[w];
  std::vector<Vector> d(seg.length(), Vector(1));
  for (std::size_t t = 0; t < seg.length(); ++t) {
    d[t][0] = 2.0 * (win.out[t][0] - batch.returns[w][t]) * inv_n;
  }
  vf.net().backward_window(win.tape, d, grad);
}

}  // namespace

BaselineLoss baseline_objective(const ValueFunction& vf, const AdvantageBatch& batch,
                                const KernelOptions& opt) {
  const std::size_t nw = batch.segments.size();
  require_shape(batch.returns.size() == nw, "advantage batch is inconsistent");
  const std::size_t cw = std::max<std::size_t>(1, opt.chunk_windows);
  const std::size_t chunks = (nw + cw - 1) / cw;
  BaselineLoss r;
  r.count = batch.sample_count();
  r.grad.assign(vf.param_count(), 0.0);
  if (r.count == 0) return r;
  const double inv_n = 1.0 / static_cast<double>(r.count);
  std::vector<double> sq(chunks, 0.0);
  std::vector<Vector> grads(chunks);
  for_each_chunk(chunks, opt.threads, [&](std::size_t c) {
    grads[c].assign(vf.param_count(), 0.0);
    ValueWindow win;
    for (std::size_t w = c * cw; w < std::min(nw, (c + 1) * cw); ++w) {
      forward_value_window(vf, batch, w, win);
      sq[c] += win.sq;
      backward_value_window(vf, batch, w, win, inv_n, grads[c]);
    }
  });
  for (std::size_t c = 0; c < chunks; ++c) {
    r.loss += sq[c];
    for (std::size_t i = 0; i < grads[c].size(); ++i) r.grad[i] += grads[c][i];
  }
  r.loss *= inv_n;
  return r;
}

BaselineLoss baseline_objective_serial(const ValueFunction& vf, const AdvantageBatch& batch) {
  BaselineLoss r;
  r.count = batch.sample_count();
  r.grad.assign(vf.param_count(), 0.0);
  if (r.count == 0) return r;
  const double inv_n = 1.0 / static_cast<double>(r.count);
  ValueWindow win;
  for (std::size_t w = 0; w < batch.segments.size(); ++w) {
    forward_value_window(vf, batch, w, win);
    r.loss += win.sq;
    backward_value_window(vf, batch, w, win, inv_n, r.grad);
  }
  r.loss *= inv_n;
  return r;
}

double batch_kl(const GaussianPolicy& pi, const AdvantageBatch& batch) {
  check_batch(pi, batch);
  double kl = 0.0;
  std::size_t n = 0;
  SequenceNet::WindowTape tape;
  std::vector<Vector> means;
  for (const auto& seg : batch.segments) {
    pi.net().forward_window(inputs_of(seg), seg.policy_carry, tape, means);
    for (std::size_t t = 0; t < seg.length(); ++t) {
      kl += policy::kl_diag_gaussian_log(seg.means[t], batch.behavior_log_std, means[t],
                                         pi.log_std());
      ++n;
    }
  }
  if (n == 0) throw ConfigError("batch_kl: empty batch");
  return kl / static_cast<double>(n);
}

}  // namespace dppo::ppo
