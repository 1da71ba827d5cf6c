// Acceptance suite: one pass/fail line per criterion.
//
//   acceptance [--criterion N] [--out DIR]
//
// Exit status 0 when every selected criterion passes, 1 on a failure, 77 when
// every selected criterion was skipped (hardware requirement not met).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "dppo/dist/chief.hpp"
#include "dppo/dist/reference.hpp"
#include "dppo/dist/runtime.hpp"
#include "dppo/errors.hpp"
#include "dppo/harness/curriculum.hpp"
#include "dppo/harness/evaluate.hpp"
#include "dppo/harness/robustness.hpp"
#include "dppo/harness/training.hpp"
#include "dppo/nn/dense_net.hpp"
#include "dppo/nn/recurrent_cell.hpp"
#include "dppo/policy/gaussian.hpp"
#include "dppo/ppo/adaptive.hpp"
#include "dppo/ppo/objective.hpp"
#include "dppo/ppo/returns.hpp"
#include "dppo/rng.hpp"
#include "dppo/stats/running_moments.hpp"
#include "dppo/terrain/course.hpp"
#include "dppo/terrain/heightfield.hpp"
#include "golden_cases.hpp"
#include "ppo_fixtures.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;
using namespace dppo;
using dppo::testing::max_rel_err;
using dppo::testing::numeric_grad;
using nn::Vector;

namespace {

enum class Status { kPass, kFail, kSkip };

struct Outcome {
  Status status = Status::kFail;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

Vector rvec(CounterRng& rng, std::size_t n, double s = 1.0) {
  Vector v(n);
  for (auto& x : v) x = rng.uniform(-s, s);
  return v;
}

fs::path g_out = "acceptance_out";

// ---------------------------------------------------------------------------
// 1. Gradient correctness.

double dense_worst(std::size_t n) {
  double worst = 0.0;
  for (std::uint64_t s = 0; s < n; ++s) {
    auto rng = CounterRng::keyed(1001, {s});
    nn::DenseNet net({4, 7, 5, 3}, nn::Activation::kTanh, nn::Activation::kIdentity);
    net.init(rng);
    for (auto& p : net.params()) p += rng.uniform(-0.1, 0.1);
    const Vector x = rvec(rng, 4, 1.5), w = rvec(rng, 3);
    auto loss = [&](std::span<const double> p) {
      nn::DenseNet n2 = net;
      std::copy(p.begin(), p.end(), n2.params().begin());
      const Vector y = n2.forward(x);
      return std::inner_product(y.begin(), y.end(), w.begin(), 0.0);
    };
    nn::DenseTape tape;
    net.forward(x, tape);
    Vector g(net.param_count(), 0.0), dx(4, 0.0);
    net.backward(tape, w, g, dx);
    worst = std::max(worst, max_rel_err(g, numeric_grad(loss, Vector(net.params().begin(), net.params().end()))));
    auto loss_x = [&](std::span<const double> xi) {
      const Vector y = net.forward(xi);
      return std::inner_product(y.begin(), y.end(), w.begin(), 0.0);
    };
    worst = std::max(worst, max_rel_err(dx, numeric_grad(loss_x, x)));
  }
  return worst;
}

double recurrent_worst(std::size_t n) {
  double worst = 0.0;
  const std::size_t steps = 5, in = 3, hid = 4;
  for (std::uint64_t s = 0; s < n; ++s) {
    auto rng = CounterRng::keyed(1002, {s});
    nn::RecurrentCell cell(in, hid);
    cell.init(rng);
    for (auto& p : cell.params()) p += rng.uniform(-0.2, 0.2);
    nn::RecurrentCell::State init = cell.zero_state();
    init.h = rvec(rng, hid, 0.5);
    init.c = rvec(rng, hid, 0.5);
    std::vector<Vector> xs, ws;
    for (std::size_t t = 0; t < steps; ++t) {
      xs.push_back(rvec(rng, in));
      ws.push_back(rvec(rng, hid));
    }
    auto loss_of = [&](const nn::RecurrentCell& c) {
      auto st = init;
      double l = 0.0;
      for (std::size_t t = 0; t < steps; ++t) {
        const Vector h = c.step(xs[t], st);
        for (std::size_t k = 0; k < hid; ++k) l += ws[t][k] * h[k];
      }
      return l;
    };
    auto loss_p = [&](std::span<const double> p) {
      nn::RecurrentCell c2 = cell;
      std::copy(p.begin(), p.end(), c2.params().begin());
      return loss_of(c2);
    };
    auto st = init;
    nn::RecurrentCell::WindowTape tape;
    cell.unroll(xs, st, tape, steps);
    Vector g(cell.param_count(), 0.0);
    cell.backward_window(tape, ws, g, nullptr);
    worst = std::max(worst, max_rel_err(g, numeric_grad(loss_p, Vector(cell.params().begin(), cell.params().end()))));
  }
  return worst;
}

double policy_worst(std::size_t n) {
  double worst = 0.0;
  for (std::uint64_t s = 0; s < n; ++s) {
    policy::NetSpec spec;
    spec.encoder.proprio_dim = 3;
    spec.encoder.trunk_hidden = {5};
    spec.output_dim = 2;
    if (s % 3 == 1) spec.lstm_units = 3;
    if (s % 3 == 2) {
      spec.encoder.extero_dim = 4;
      spec.encoder.proprio_hidden = {4};
      spec.encoder.extero_hidden = {3};
      spec.lstm_units = 2;
    }
    policy::SequenceNet net(spec);
    auto rng = CounterRng::keyed(1003, {s});
    net.init(rng);
    std::vector<Vector> obs, w;
    for (int t = 0; t < 4; ++t) {
      obs.push_back(rvec(rng, net.input_dim()));
      w.push_back(rvec(rng, net.output_dim()));
    }
    policy::Carry c0 = net.initial_carry();
    if (net.recurrent()) {
      c0.rnn.h = rvec(rng, spec.lstm_units, 0.5);
      c0.rnn.c = rvec(rng, spec.lstm_units, 0.5);
    }
    auto loss = [&](std::span<const double> p) {
      policy::SequenceNet n2 = net;
      n2.set_params(p);
      policy::Carry c = c0;
      double l = 0.0;
      for (int t = 0; t < 4; ++t) {
        const Vector y = n2.step(obs[t], c);
        for (std::size_t k = 0; k < y.size(); ++k) l += w[t][k] * y[k];
      }
      return l;
    };
    policy::SequenceNet::WindowTape tape;
    std::vector<Vector> out;
    net.forward_window(obs, c0, tape, out);
    Vector g(net.param_count(), 0.0);
    net.backward_window(tape, w, g);
    Vector p0(net.param_count());
    net.get_params(p0);
    worst = std::max(worst, max_rel_err(g, numeric_grad(loss, p0)));

    // Gaussian head: log-density gradient in the mean and log-std.
    const Vector m = rvec(rng, 3), ls = rvec(rng, 3, 0.5), a = rvec(rng, 3, 2.0);
    Vector dm(3, 0.0), dls(3, 0.0);
    policy::gaussian_log_prob_grad(m, ls, a, 1.0, dm, dls);
    auto f_m = [&](std::span<const double> x) { return policy::gaussian_log_prob(x, ls, a); };
    auto f_l = [&](std::span<const double> x) { return policy::gaussian_log_prob(m, x, a); };
    worst = std::max(worst, max_rel_err(dm, numeric_grad(f_m, m)));
    worst = std::max(worst, max_rel_err(dls, numeric_grad(f_l, ls)));
  }
  return worst;
}

double ppo_worst(std::size_t n) {
  double worst = 0.0;
  for (std::uint64_t s = 0; s < n; ++s) {
    ppo::PpoConfig cfg;
    cfg.K = 4;
    const std::size_t lstm = s % 2 ? 3 : 0;
    policy::GaussianPolicy behavior(testing::tiny_spec(3, 2, lstm));
    policy::ValueFunction vf(testing::tiny_spec(3, 1, lstm));
    auto rng = CounterRng::keyed(1004, {s});
    behavior.init(rng);
    vf.init(rng);
    behavior.set_log_std(Vector{rng.uniform(-0.5, 0.2), rng.uniform(-0.5, 0.2)});
    const auto b = ppo::normalize_advantages(testing::random_batch(behavior, vf, 4, cfg.K, s, cfg));
    policy::GaussianPolicy pi = behavior;
    auto p = pi.flatten().values;
    for (auto& x : p) x += rng.uniform(-0.1, 0.1);
    pi.set_values(p);
    const double lambda = rng.uniform(0.1, 3.0);
    const double kl_target = 1e-4;  // keeps the hinge term active
    const auto r = ppo::ppo_objective(pi, b, lambda, 20.0, kl_target);
    auto f = [&](std::span<const double> x) {
      policy::GaussianPolicy q = pi;
      q.set_values(x);
      return ppo::ppo_objective_serial(q, b, lambda, 20.0, kl_target).objective;
    };
    worst = std::max(worst, max_rel_err(r.grad, numeric_grad(f, p)));
  }
  return worst;
}

double baseline_worst(std::size_t n) {
  double worst = 0.0;
  for (std::uint64_t s = 0; s < n; ++s) {
    ppo::PpoConfig cfg;
    cfg.K = 4;
    const std::size_t lstm = s % 2 ? 4 : 0;
    policy::ValueFunction vf(testing::tiny_spec(3, 1, lstm));
    policy::GaussianPolicy pi(testing::tiny_spec(3, 1, lstm));
    auto rng = CounterRng::keyed(1005, {s});
    vf.init(rng);
    pi.init(rng);
    const auto batch = testing::random_batch(pi, vf, 3, 4, s, cfg);
    const auto r = ppo::baseline_objective(vf, batch);
    auto f = [&](std::span<const double> x) {
      policy::ValueFunction q = vf;
      q.set_values(x);
      return ppo::baseline_objective_serial(q, batch).loss;
    };
    worst = std::max(worst, max_rel_err(r.grad, numeric_grad(f, vf.flatten().values)));
  }
  return worst;
}

Outcome criterion1() {
  const std::size_t n = 100;
  const double d = dense_worst(n), r = recurrent_worst(n), p = policy_worst(n), o = ppo_worst(n),
               b = baseline_worst(n);
  const double worst = std::max({d, r, p, o, b});
  return {worst < 1e-4 ? Status::kPass : Status::kFail,
          fmt("max rel err over %zu instances each: dense %.2e, recurrent %.2e, policy %.2e, ppo %.2e, "
              "baseline %.2e (limit 1e-4)",
              n, d, r, p, o, b)};
}

// ---------------------------------------------------------------------------
// 2. KL oracle.

Outcome criterion2() {
  auto rng = CounterRng::keyed(2001, {});
  double worst = 0.0;
  for (int pair = 0; pair < 20; ++pair) {
    const std::size_t d = 1 + pair % 3;
    policy::DiagGaussian p{rvec(rng, d), Vector(d)}, q{rvec(rng, d), Vector(d)};
    for (std::size_t k = 0; k < d; ++k) {
      p.stddev[k] = std::exp(rng.uniform(-0.7, 0.7));
      q.stddev[k] = std::exp(rng.uniform(-0.7, 0.7));
    }
    // E_p[log p(x) - log q(x)] from the densities, 1e6 samples.
    const int samples = 1000000;
    double acc = 0.0;
    for (int i = 0; i < samples; ++i) {
      double lp = 0.0, lq = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double x = p.mean[k] + p.stddev[k] * rng.normal();
        const double zp = (x - p.mean[k]) / p.stddev[k], zq = (x - q.mean[k]) / q.stddev[k];
        lp += -0.5 * zp * zp - std::log(p.stddev[k]);
        lq += -0.5 * zq * zq - std::log(q.stddev[k]);
      }
      acc += lp - lq;
    }
    worst = std::max(worst, std::abs(acc / samples - policy::kl_diag_gaussian(p, q)));
  }
  std::size_t negative = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t d = 1 + t % 5;
    policy::DiagGaussian p{rvec(rng, d, 3.0), Vector(d)}, q{rvec(rng, d, 3.0), Vector(d)};
    for (std::size_t k = 0; k < d; ++k) {
      p.stddev[k] = std::exp(rng.uniform(-2.0, 2.0));
      q.stddev[k] = std::exp(rng.uniform(-2.0, 2.0));
    }
    if (!(policy::kl_diag_gaussian(p, q) >= 0.0)) ++negative;
  }
  const bool ok = worst < 1e-2 && negative == 0;
  return {ok ? Status::kPass : Status::kFail,
          fmt("max |closed form - Monte Carlo| over 20 pairs %.2e (limit 1e-2); negative KL on %zu of 1000 pairs",
              worst, negative)};
}

// ---------------------------------------------------------------------------
// 3. Returns oracle.

Outcome criterion3() {
  auto rng = CounterRng::keyed(3001, {});
  std::size_t mismatches = 0, checked = 0;
  for (int ep = 0; ep < 50; ++ep) {
    const std::size_t len = 1 + rng.next_u64() % 60;
    const double gamma = rng.uniform(0.5, 1.0);
    ppo::TrajectorySegment seg;
    seg.rewards.resize(len);
    seg.values.resize(len + 1);
    for (auto& x : seg.rewards) x = rng.uniform(-2.0, 2.0);
    for (auto& x : seg.values) x = rng.uniform(-2.0, 2.0);
    seg.values[len] = 0.0;  // terminal bootstrap
    seg.terminal = true;
    const std::size_t K = len + rng.next_u64() % 5;
    const auto out = ppo::k_step_returns(seg, gamma, K);
    for (std::size_t t = 0; t < len; ++t) {
      double g = 0.0, disc = 1.0;
      for (std::size_t u = t; u < len; ++u) {
        g += disc * seg.rewards[u];
        disc *= gamma;
      }
      ++checked;
      if (out.returns[t] != g || out.advantages[t] != g - seg.values[t]) ++mismatches;
    }
  }
  return {mismatches == 0 ? Status::kPass : Status::kFail,
          fmt("%zu of %zu returns differ from the full-episode loop (exact comparison, 50 episodes)", mismatches,
              checked)};
}

// ---------------------------------------------------------------------------
// 4-6. Distributed runtime.

dist::TrainingSetup reacher_setup(std::uint64_t seed, std::size_t T) {
  harness::ExperimentConfig c;
  c.seed = seed;
  c.ppo.T = T;
  c.ppo.K = 20;
  c.ppo.M = 5;
  c.ppo.B = 5;
  c.ppo.lr_policy = 1e-3;
  c.ppo.lr_baseline = 3e-3;
  c.network.trunk_hidden = {32};
  c.network.lstm_units = 16;
  c.env.reacher.episode_length = 30;
  c.env.reacher.visible_steps = 3;
  return harness::make_setup(c);
}

double max_abs(const Vector& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// |a - b|_inf / |b - base|_inf: distance between the two updates relative to
// the size of the reference update.
double update_distance(const Vector& a, const Vector& b, const Vector& base) {
  Vector diff(a.size()), db(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff[i] = a[i] - b[i];
    db[i] = b[i] - base[i];
  }
  return max_abs(diff) / std::max(max_abs(db), 1e-300);
}

Outcome criterion4() {
  // (a) W = 1, D = 0 against the single-process loop, every iteration.
  const std::uint64_t n = 50;
  dist::TrainingSetup s = reacher_setup(41, 512);
  std::vector<std::pair<Vector, Vector>> dist_params;
  dist::Chief chief(s, 1, 0, n);
  dist::RunOptions opt;
  opt.on_iteration = [&](const dist::IterationSummary&, const dist::Chief& c) {
    dist_params.emplace_back(c.theta().values, c.phi().values);
  };
  dist::run_in_process(s, chief, opt);
  dist::ReferenceTrainer ref(s, 1);
  std::size_t bit_mismatch = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    ref.run_iteration();
    if (i >= dist_params.size() || dist_params[i].first != ref.theta().values ||
        dist_params[i].second != ref.phi().values) {
      ++bit_mismatch;
    }
  }
  const bool same_lambda = chief.lambda() == ref.lambda() && chief.obs_stats() == ref.obs_stats();

  // (b) W = 4, D = 0 with the batch partitioned against one learner on the
  // union. The hinge penalty and the early stop act on per-worker KL
  // estimates, so they are switched off here; everything else is live.
  dist::TrainingSetup s4 = reacher_setup(42, 512);
  s4.ppo.xi = 0.0;
  s4.ppo.early_stop_factor = 1e12;
  const std::uint64_t n4 = 50;
  std::vector<std::pair<Vector, Vector>> p4;
  dist::Chief c4(s4, 4, 0, n4);
  dist::RunOptions o4;
  o4.on_iteration = [&](const dist::IterationSummary&, const dist::Chief& c) {
    p4.emplace_back(c.theta().values, c.phi().values);
  };
  dist::run_in_process(s4, c4, o4);
  dist::ReferenceTrainer r4(s4, 4);
  double worst = 0.0;
  Vector prev_theta = dist::initial_model(s4).theta.values, prev_phi = dist::initial_model(s4).phi.values;
  for (std::uint64_t i = 0; i < n4; ++i) {
    r4.run_iteration();
    // Per-iteration distance of the two parameter vectors relative to the
    // reference's own change this iteration, and of theta overall.
    worst = std::max(worst, update_distance(p4[i].first, r4.theta().values, prev_theta));
    worst = std::max(worst, update_distance(p4[i].second, r4.phi().values, prev_phi));
    prev_theta = r4.theta().values;
    prev_phi = r4.phi().values;
  }
  const bool ok = bit_mismatch == 0 && same_lambda && worst < 1e-9 && p4.size() == n4;
  return {ok ? Status::kPass : Status::kFail,
          fmt("W=1: %zu of %llu iterations differ bitwise from the reference loop; W=4: max per-iteration "
              "relative parameter distance %.2e over %llu iterations (limit 1e-9)",
              bit_mismatch, static_cast<unsigned long long>(n), worst, static_cast<unsigned long long>(n4))};
}

Outcome criterion5() {
  dist::TrainingSetup s = reacher_setup(51, 256);
  s.ppo.M = 3;
  s.ppo.B = 3;
  std::string detail;
  bool ok = true;
  for (auto mode : {dist::DriverMode::kDeterministic, dist::DriverMode::kThreaded}) {
    dist::Chief chief(s, 4, 1, 20);
    dist::RunOptions opt;
    opt.mode = mode;
    opt.faults[3].stall_at_iteration = 0;  // never answers
    opt.timeout.min_seconds = 1.0;
    opt.timeout.initial_seconds = 60.0;
    std::size_t done = 0;
    try {
      const auto r = dist::run_in_process(s, chief, opt);
      done = r.iterations.size();
    } catch (const std::exception& e) {
      detail += std::string(" error: ") + e.what();
    }
    ok = ok && done == 20 && chief.finished();
    detail += fmt("%s D=1: %zu/20 iterations;", dist::to_string(mode).c_str(), done);
  }
  for (auto mode : {dist::DriverMode::kDeterministic, dist::DriverMode::kThreaded}) {
    dist::Chief chief(s, 4, 0, 20);
    dist::RunOptions opt;
    opt.mode = mode;
    opt.faults[3].stall_at_iteration = 0;
    opt.timeout.min_seconds = 0.5;
    opt.timeout.initial_seconds = 5.0;
    bool timed_out = false;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      dist::run_in_process(s, chief, opt);
    } catch (const TimeoutError&) {
      timed_out = true;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ok = ok && timed_out && chief.open_round().iteration == 0;
    detail += fmt(" %s D=0: %s after %.1fs;", dist::to_string(mode).c_str(),
                  timed_out ? "timed out" : "did not time out", secs);
  }
  return {ok ? Status::kPass : Status::kFail, "W=4, one worker stalled:" + detail};
}

Outcome criterion6() {
  auto rng = CounterRng::keyed(6001, {});
  const std::size_t dim = 6, n = 10000;
  std::vector<Vector> xs(n);
  for (auto& x : xs) {
    x = rvec(rng, dim, 5.0);
    x[0] += 100.0;  // offset mean to stress cancellation
  }
  stats::RunningMoments single(dim);
  for (const auto& x : xs) single.update(x);
  std::vector<stats::RunningMoments> shards(8, stats::RunningMoments(dim));
  for (std::size_t i = 0; i < n; ++i) shards[(i * 7919) % 8].update(xs[i]);
  stats::RunningMoments merged(dim);
  for (const auto& sh : shards) merged.merge(sh);
  double worst = 0.0;
  const Vector v1 = single.variance(), v2 = merged.variance();
  for (std::size_t k = 0; k < dim; ++k) {
    worst = std::max(worst, std::abs(single.mean()[k] - merged.mean()[k]) / std::abs(single.mean()[k]));
    worst = std::max(worst, std::abs(v1[k] - v2[k]) / v1[k]);
  }

  // Every worker holds the same lambda and statistics after each sync.
  dist::TrainingSetup s = reacher_setup(61, 256);
  s.ppo.M = 3;
  s.ppo.B = 2;
  s.ppo.kl_target = 1e-4;  // lambda moves every iteration
  dist::Chief chief(s, 4, 0, 5);
  std::mutex mu;
  std::map<std::string, std::vector<std::tuple<double, stats::RunningMoments, stats::RunningMoments>>> seen;
  dist::RunOptions opt;
  opt.mode = dist::DriverMode::kThreaded;
  opt.on_sync = [&](const dist::Worker& w, const dist::Params& p) {
    if (p.stop) return;
    std::lock_guard<std::mutex> lk(mu);
    const auto& l = w.learner();
    seen[p.next.str()].emplace_back(l.lambda(), l.obs_stats(), l.reward_stats());
  };
  dist::run_in_process(s, chief, opt);
  std::size_t syncs = 0, differing = 0;
  for (const auto& [key, v] : seen) {
    if (v.size() != 4) ++differing;
    for (const auto& e : v) {
      ++syncs;
      if (e != v.front()) ++differing;
    }
  }
  const bool ok = worst < 1e-9 && differing == 0 && syncs > 0;
  return {ok ? Status::kPass : Status::kFail,
          fmt("8-way merge max rel err %.2e on 1e4 vectors (limit 1e-9); %zu of %zu worker syncs disagree on "
              "lambda or statistics",
              worst, differing, syncs)};
}

// ---------------------------------------------------------------------------
// 7-9. Learning experiments, driven by the configs directory.

harness::ExperimentConfig load_experiment(const std::string& name) {
  return harness::load_config(std::string(DPPO_CONFIG_DIR) + "/" + name);
}

harness::TrainingOutcome train_or_reuse(const harness::ExperimentConfig& c) {
  if (auto done = harness::load_completed(c)) {
    std::printf("  reusing %s\n", c.output_dir.c_str());
    return std::move(*done);
  }
  std::printf("  training %s\n", c.output_dir.c_str());
  std::fflush(stdout);
  return harness::run_training(c);
}

// Best relative improvement over iteration 0 reached within the budget,
// with the training return smoothed over a trailing 10-iteration window.
double improvement(const std::vector<harness::MetricsRow>& rows) {
  if (rows.empty()) return 0.0;
  const double r0 = rows.front().mean_return;
  double best = -INFINITY, acc = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    acc += rows[i].mean_return;
    if (i >= 10) acc -= rows[i - 10].mean_return;
    if (i >= 9) best = std::max(best, acc / 10.0);
  }
  if (rows.size() < 10) best = acc / static_cast<double>(rows.size());
  return (best - r0) / std::abs(r0);
}

Outcome criterion7() {
  const harness::ExperimentConfig base = load_experiment("memory_reacher.ini");
  std::vector<double> rec, mem;
  std::string detail;
  for (std::uint64_t seed : base.curriculum.seeds) {
    for (bool recurrent : {true, false}) {
      harness::ExperimentConfig c = base;
      c.seed = seed;
      if (!recurrent) c.network.lstm_units = 0;
      c.output_dir = (g_out / "c7" / ((recurrent ? "recurrent_seed" : "memoryless_seed") + std::to_string(seed))).string();
      const auto out = train_or_reuse(c);
      const double imp = improvement(out.rows);
      (recurrent ? rec : mem).push_back(imp);
      detail += fmt(" %s seed %llu: %+.1f%% (%.2f -> %.2f);", recurrent ? "recurrent" : "memoryless",
                    static_cast<unsigned long long>(seed), 100.0 * imp, out.rows.front().mean_return,
                    out.rows.back().mean_return);
    }
  }
  const auto passing = std::count_if(rec.begin(), rec.end(), [](double v) { return v >= 0.5; });
  const double mean_rec = std::accumulate(rec.begin(), rec.end(), 0.0) / static_cast<double>(rec.size());
  const double mean_mem = std::accumulate(mem.begin(), mem.end(), 0.0) / static_cast<double>(mem.size());
  const bool ok = passing >= 2 && mean_mem < mean_rec;
  return {ok ? Status::kPass : Status::kFail,
          fmt("%ld of %zu recurrent seeds improve >= 50%%; mean improvement recurrent %+.1f%% vs memoryless "
              "%+.1f%%;",
              static_cast<long>(passing), rec.size(), 100.0 * mean_rec, 100.0 * mean_mem) +
              detail};
}

harness::CurriculumReport curriculum_runs() {
  harness::ExperimentConfig c = load_experiment("hopper_hurdles.ini");
  c.output_dir = (g_out / "c8").string();
  harness::CurriculumOptions opt;
  opt.reuse_completed = true;
  opt.log = [](const std::string& s) {
    std::printf("  %s\n", s.c_str());
    std::fflush(stdout);
  };
  return harness::curriculum_experiment(c, opt);
}

Outcome criterion8() {
  const auto r = curriculum_runs();
  std::string detail;
  for (const auto& run : r.runs) {
    detail += fmt(" %s seed %llu: %llu;", harness::to_string(run.arm).c_str(),
                  static_cast<unsigned long long>(run.seed), static_cast<unsigned long long>(run.to_threshold_hard));
  }
  const bool ok = r.median_curriculum_hard < r.median_stationary_hard;
  return {ok ? Status::kPass : Status::kFail,
          fmt("hard course, threshold %.1f: median iterations to threshold curriculum %.1f vs stationary %.1f "
              "(censored at %llu);",
              r.threshold_hard, r.median_curriculum_hard, r.median_stationary_hard,
              static_cast<unsigned long long>(r.iterations + 1)) +
              detail + " report " + (g_out / "c8" / "report.json").string()};
}

Outcome criterion9() {
  const auto r = curriculum_runs();
  const harness::ExperimentConfig base = load_experiment("hopper_hurdles.ini");
  std::vector<harness::PolicySnapshot> hurdle, flat;
  for (const auto& run : r.runs) {
    if (run.arm == harness::Arm::kStationary) hurdle.push_back(harness::snapshot_from_checkpoint(run.final_state));
  }
  for (std::uint64_t seed : base.curriculum.seeds) {
    harness::ExperimentConfig c = base;
    c.seed = seed;
    c.env.course.type = terrain::TerrainType::kFlat;
    c.env.course.difficulty.curriculum = false;
    c.output_dir = (g_out / "c9" / ("flat_seed" + std::to_string(seed))).string();
    const auto out = train_or_reuse(c);
    flat.push_back(harness::snapshot_from_checkpoint(out.final_state));
  }
  const harness::EvalOptions eo{base.robustness.episodes, base.eval.seed, base.eval.mean_action};
  const auto rep = harness::robustness_suite(hurdle, flat, base.robustness, eo);
  fs::create_directories(g_out / "c9");
  std::ofstream(g_out / "c9" / "robustness.csv") << harness::robustness_table(rep);
  std::ofstream(g_out / "c9" / "robustness.svg") << harness::robustness_svg(rep);
  std::string detail;
  for (const auto& row : rep.rows) {
    detail += fmt(" %s %.2f/%.2f;", row.setting.name.c_str(), row.hurdle_normalized, row.flat_normalized);
  }
  const bool ok = rep.win_fraction() >= 0.6;
  return {ok ? Status::kPass : Status::kFail,
          fmt("hurdle-trained >= flat-trained on %zu of %zu perturbed settings (%.0f%%, need 60%%); normalized "
              "hurdle/flat:",
              rep.hurdle_wins, rep.perturbed, 100.0 * rep.win_fraction()) +
              detail};
}

// ---------------------------------------------------------------------------
// 10. Throughput scaling.

Outcome criterion10() {
  const unsigned cores = std::thread::hardware_concurrency();
  if (cores < 4) {
    return {Status::kSkip, fmt("needs >= 4 cores, found %u", cores)};
  }
  auto rate = [](std::size_t workers) {
    harness::ExperimentConfig c;
    c.env.kind = harness::EnvKind::kHopper;
    c.ppo.T = 2048;
    c.ppo.M = 1;
    c.ppo.B = 1;
    c.workers = workers;
    c.driver = dist::DriverMode::kThreaded;
    const auto s = harness::make_setup(c);
    dist::Chief chief(s, workers, 0, 4);
    dist::RunOptions opt;
    opt.mode = dist::DriverMode::kThreaded;
    const auto r = dist::run_in_process(s, chief, opt);
    double steps = 0.0, secs = 0.0;
    for (std::size_t i = 1; i < r.iterations.size(); ++i) {  // first iteration warms up
      steps += static_cast<double>(r.iterations[i].env_steps);
      secs += r.iterations[i].collect_seconds;
    }
    return steps / secs;
  };
  const double one = rate(1), four = rate(4);
  const double ratio = four / one;
  return {ratio >= 2.0 ? Status::kPass : Status::kFail,
          fmt("collection rate 1 worker %.0f steps/s, 4 workers %.0f steps/s, ratio %.2f (need >= 2) on %u cores",
              one, four, ratio, cores)};
}

// ---------------------------------------------------------------------------
// 11. Terrain determinism and statistics.

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome criterion11() {
  std::size_t golden_bad = 0;
  for (const auto& c : testing::golden_cases()) {
    const auto want = read_file(fs::path(DPPO_GOLDEN_DIR) / (std::string(c.name) + ".csv"));
    if (want.empty() || want != terrain::to_csv(terrain::generate_course(c.spec, c.seed))) ++golden_bad;
  }

  terrain::CourseSpec st;
  st.type = terrain::TerrainType::kHurdles;
  st.hurdle_height = {0.15, 0.85};
  std::size_t hurdles = 0, outside = 0;
  double lo = INFINITY, hi = -INFINITY;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    for (const auto& o : terrain::generate(st, seed).obstacles) {
      ++hurdles;
      if (o.height < st.hurdle_height.lo || o.height > st.hurdle_height.hi) ++outside;
      lo = std::min(lo, o.height);
      hi = std::max(hi, o.height);
    }
  }
  std::size_t cells_outside = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    for (double g : terrain::generate_course(st, seed).ground) {
      if (g != 0.0 && (g < st.hurdle_height.lo || g > st.hurdle_height.hi)) ++cells_outside;
    }
  }
  const double span = st.hurdle_height.hi - st.hurdle_height.lo;
  const bool covers = lo < st.hurdle_height.lo + 0.02 * span && hi > st.hurdle_height.hi - 0.02 * span;

  std::size_t courses = 0, violations = 0;
  for (auto type : {terrain::TerrainType::kHurdles, terrain::TerrainType::kGaps, terrain::TerrainType::kPlatforms,
                    terrain::TerrainType::kVariable, terrain::TerrainType::kMixed}) {
    terrain::CourseSpec cs;
    cs.type = type;
    cs.difficulty = {true, 0.1, 0.9, 0.3};
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const auto course = terrain::generate(cs, seed);
      ++courses;
      for (std::size_t j = 1; j < course.obstacles.size(); ++j) {
        if (course.obstacles[j].difficulty < course.obstacles[j - 1].difficulty) ++violations;
      }
    }
  }
  const bool ok = golden_bad == 0 && outside == 0 && cells_outside == 0 && covers && violations == 0;
  return {ok ? Status::kPass : Status::kFail,
          fmt("golden mismatches %zu of 5; %zu hurdles over 1000 seeds, %zu outside [%.2f, %.2f], observed "
              "[%.4f, %.4f], %zu heightfield cells outside; %zu difficulty decreases over %zu curriculum courses",
              golden_bad, hurdles, outside, st.hurdle_height.lo, st.hurdle_height.hi, lo, hi, cells_outside, violations, courses)};
}

// ---------------------------------------------------------------------------
// 12. Lambda adaptation and early stop on a scripted KL sequence.

Outcome criterion12() {
  ppo::PpoConfig c;  // kl_target 0.01, alpha 1.5, beta_high 2, beta_low 0.5
  c.lambda_max = 3.0;
  c.lambda_min = 0.5;
  struct Step {
    double kl;
    double lambda_after;  // worked out by hand with alpha~ = 1.5 (one worker)
    ppo::StopDecision stop;
  };
  using ppo::StopDecision;
  const std::vector<Step> script = {
      {0.030, 1.5, StopDecision::kProceed},       // > 2 KLt: up
      {0.025, 2.25, StopDecision::kProceed},      // up
      {0.010, 2.25, StopDecision::kProceed},      // in band: hold
      {0.020, 2.25, StopDecision::kProceed},      // band edge: hold
      {0.041, 3.0, StopDecision::kBreak},         // up, clamped at 3; > 4 KLt: stop
      {0.040, 3.0, StopDecision::kProceed},       // up, clamped; exactly 4 KLt: proceed
      {0.004, 2.0, StopDecision::kProceed},       // < KLt / 2: down
      {0.005, 2.0, StopDecision::kProceed},       // band edge: hold
      {0.000, 2.0 / 1.5, StopDecision::kProceed}, // down
      {0.001, 2.0 / 1.5 / 1.5, StopDecision::kProceed},
      {0.002, 2.0 / 1.5 / 1.5 / 1.5, StopDecision::kProceed},
      {0.003, 0.5, StopDecision::kProceed},       // down, clamped at 0.5
      {0.100, 0.75, StopDecision::kBreak},
  };
  const double a1 = ppo::alpha_tilde(c, 1);
  std::size_t wrong = 0;
  double lambda = 1.0;
  for (const auto& s : script) {
    lambda = ppo::adapt_lambda(lambda, s.kl, c, a1);
    if (lambda != s.lambda_after) ++wrong;
    if (ppo::early_stop_check(s.kl, c.kl_target, c.early_stop_factor) != s.stop) ++wrong;
  }
  // Four workers: alpha~ = 1 + 0.5 / 4.
  const double a4 = ppo::alpha_tilde(c, 4);
  if (a4 != 1.125) ++wrong;
  if (ppo::adapt_lambda(1.0, 0.03, c, a4) != 1.125) ++wrong;
  if (ppo::adapt_lambda(1.125, 0.001, c, a4) != 1.0) ++wrong;
  return {wrong == 0 ? Status::kPass : Status::kFail,
          fmt("%zu wrong decisions over %zu scripted steps plus 3 four-worker checks", wrong, script.size())};
}

const std::map<int, std::pair<const char*, std::function<Outcome()>>>& criteria() {
  static const std::map<int, std::pair<const char*, std::function<Outcome()>>> m = {
      {1, {"gradient correctness", criterion1}},
      {2, {"KL oracle", criterion2}},
      {3, {"return/advantage oracle", criterion3}},
      {4, {"distributed equivalence", criterion4}},
      {5, {"quorum semantics", criterion5}},
      {6, {"normalization merge and sync", criterion6}},
      {7, {"memory reacher learning", criterion7}},
      {8, {"curriculum effect", criterion8}},
      {9, {"robustness effect", criterion9}},
      {10, {"throughput scaling", criterion10}},
      {11, {"terrain determinism and statistics", criterion11}},
      {12, {"lambda adaptation and early stop", criterion12}},
  };
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  int only = 0;
  std::string out = g_out.string();
  app.add_option("--criterion", only, "run one criterion (1-12)");
  app.add_option("--out", out, "directory for experiment runs and reports");
  CLI11_PARSE(app, argc, argv);
  g_out = out;

  std::size_t pass = 0, fail = 0, skip = 0;
  for (const auto& [id, entry] : criteria()) {
    if (only != 0 && id != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = entry.second();
    } catch (const std::exception& e) {
      o = {Status::kFail, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const char* tag = o.status == Status::kPass ? "PASS" : (o.status == Status::kSkip ? "SKIP" : "FAIL");
    std::printf("criterion %2d %-36s %s  [%.1fs] %s\n", id, entry.first, tag, secs, o.detail.c_str());
    std::fflush(stdout);
    (o.status == Status::kPass ? pass : (o.status == Status::kSkip ? skip : fail))++;
  }
  if (only != 0 && pass + fail + skip == 0) {
    std::fprintf(stderr, "no criterion %d\n", only);
    return 2;
  }
  if (fail > 0) return 1;
  if (pass == 0 && skip > 0) return 77;
  return 0;
}
