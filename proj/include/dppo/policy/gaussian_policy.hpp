#ifndef DPPO_POLICY_GAUSSIAN_POLICY_HPP_
#define DPPO_POLICY_GAUSSIAN_POLICY_HPP_

#include <span>

#include "dppo/nn/param_vector.hpp"
#include "dppo/policy/gaussian.hpp"
#include "dppo/policy/sequence_net.hpp"
#include "dppo/rng.hpp"

namespace dppo::policy {

// pi(a|s) = N(mean_net(s), diag(exp(log_std))^2) with a state-independent
// log standard deviation. Flat parameters: [net..., log_std].
class GaussianPolicy {
 public:
  struct ActResult {
    Vector action;
    double log_prob = 0.0;
    Vector mean;
  };

  GaussianPolicy() = default;
  explicit GaussianPolicy(const NetSpec& spec, double initial_log_std = 0.0);

  void init(CounterRng& rng);
  std::size_t action_dim() const { return net_.output_dim(); }
  std::size_t obs_dim() const { return net_.input_dim(); }
  bool recurrent() const { return net_.recurrent(); }
  const SequenceNet& net() const { return net_; }
  const Vector& log_std() const { return log_std_; }
  void set_log_std(Vector v);

  std::size_t param_count() const { return layout_.total(); }
  const nn::ParamLayout& layout() const { return layout_; }
  nn::ParamVector flatten(std::uint64_t version = 0) const;
  void unflatten(const nn::ParamVector& p);
  void set_values(std::span<const double> values);

  Carry initial_carry() const { return net_.initial_carry(); }

  // Samples an action; throws NonFiniteError if the network output is not
  // finite.
  ActResult act(std::span<const double> obs, Carry& carry, CounterRng& rng) const;
  Vector mean(std::span<const double> obs, Carry& carry) const;
  double log_prob(std::span<const double> obs, Carry& carry,
                  std::span<const double> action) const;

 private:
  SequenceNet net_;
  Vector log_std_;
  nn::ParamLayout layout_;
};

// Scalar baseline V(s) on its own encoder.
class ValueFunction {
 public:
  ValueFunction() = default;
  explicit ValueFunction(NetSpec spec);

  void init(CounterRng& rng) { net_.init(rng); }
  const SequenceNet& net() const { return net_; }
  bool recurrent() const { return net_.recurrent(); }
  std::size_t param_count() const { return net_.param_count(); }
  const nn::ParamLayout& layout() const { return net_.layout(); }
  nn::ParamVector flatten(std::uint64_t version = 0) const;
  void unflatten(const nn::ParamVector& p);
  void set_values(std::span<const double> values) { net_.set_params(values); }

  Carry initial_carry() const { return net_.initial_carry(); }
  double value(std::span<const double> obs, Carry& carry) const;

 private:
  SequenceNet net_;
};

// Mean over observations of KL(pi_old(.|s) || pi_new(.|s)); each
// observation is evaluated from a fresh carry. Throws ConfigError on an
// empty batch.
double state_kl(const GaussianPolicy& old_policy, const GaussianPolicy& new_policy,
                std::span<const Vector> observations);

}  // namespace dppo::policy

#endif  // DPPO_POLICY_GAUSSIAN_POLICY_HPP_
