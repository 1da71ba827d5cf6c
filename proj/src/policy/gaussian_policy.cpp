#include "dppo/policy/gaussian_policy.hpp"

#include <cmath>

#include "dppo/errors.hpp"

namespace dppo::policy {
namespace {

void check_finite(const Vector& v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw NonFiniteError(what);
  }
}

}  // namespace

GaussianPolicy::GaussianPolicy(const NetSpec& spec, double initial_log_std)
    : net_(spec), log_std_(spec.output_dim, initial_log_std) {
  layout_.append("net.", net_.layout());
  layout_.append("log_std", log_std_.size());
}

void GaussianPolicy::init(CounterRng& rng) { net_.init(rng); }

void GaussianPolicy::set_log_std(Vector v) {
  require_shape(v.size() == log_std_.size(), "set_log_std: dimension mismatch");
  log_std_ = std::move(v);
}

nn::ParamVector GaussianPolicy::flatten(std::uint64_t version) const {
  nn::ParamVector p{version, Vector(param_count()), layout_};
  net_.get_params(std::span<double>(p.values).first(net_.param_count()));
  std::copy(log_std_.begin(), log_std_.end(),
            p.values.begin() + static_cast<std::ptrdiff_t>(net_.param_count()));
  return p;
}

void GaussianPolicy::unflatten(const nn::ParamVector& p) {
  if (!(p.layout == layout_)) throw ShapeError("GaussianPolicy::unflatten: layout mismatch");
  set_values(p.values);
}

void GaussianPolicy::set_values(std::span<const double> values) {
  require_shape(values.size() == param_count(), "GaussianPolicy::set_values size");
  net_.set_params(values.first(net_.param_count()));
  std::copy(values.begin() + static_cast<std::ptrdiff_t>(net_.param_count()), values.end(),
            log_std_.begin());
}

GaussianPolicy::ActResult GaussianPolicy::act(std::span<const double> obs, Carry& carry,
                                              CounterRng& rng) const {
  ActResult r;
  r.mean = net_.step(obs, carry);
  check_finite(r.mean, "policy network produced a non-finite mean");
  r.action.resize(r.mean.size());
  for (std::size_t k = 0; k < r.mean.size(); ++k) {
    r.action[k] = r.mean[k] + std::exp(log_std_[k]) * rng.normal();
  }
  r.log_prob = gaussian_log_prob(r.mean, log_std_, r.action);
  return r;
}

Vector GaussianPolicy::mean(std::span<const double> obs, Carry& carry) const {
  return net_.step(obs, carry);
}

double GaussianPolicy::log_prob(std::span<const double> obs, Carry& carry,
                                std::span<const double> action) const {
  const Vector m = net_.step(obs, carry);
  return gaussian_log_prob(m, log_std_, action);
}

namespace {
NetSpec scalar_output(NetSpec spec) {
  spec.output_dim = 1;
  return spec;
}
}  // namespace

ValueFunction::ValueFunction(NetSpec spec) : net_(scalar_output(std::move(spec))) {}

nn::ParamVector ValueFunction::flatten(std::uint64_t version) const {
  nn::ParamVector p{version, Vector(param_count()), net_.layout()};
  net_.get_params(p.values);
  return p;
}

void ValueFunction::unflatten(const nn::ParamVector& p) {
  if (!(p.layout == net_.layout())) throw ShapeError("ValueFunction::unflatten: layout mismatch");
  net_.set_params(p.values);
}

double ValueFunction::value(std::span<const double> obs, Carry& carry) const {
  const double v = net_.step(obs, carry)[0];
  if (!std::isfinite(v)) throw NonFiniteError("value network produced a non-finite output");
  return v;
}

double state_kl(const GaussianPolicy& old_policy, const GaussianPolicy& new_policy,
                std::span<const Vector> observations) {
  if (observations.empty()) throw ConfigError("state_kl: empty observation batch");
  if (!(old_policy.layout() == new_policy.layout())) {
    throw ShapeError("state_kl: policies have different architectures");
  }
  double total = 0.0;
  for (const auto& obs : observations) {
    Carry c_old = old_policy.initial_carry();
    Carry c_new = new_policy.initial_carry();
    const Vector m_old = old_policy.mean(obs, c_old);
    const Vector m_new = new_policy.mean(obs, c_new);
    total += kl_diag_gaussian_log(m_old, old_policy.log_std(), m_new, new_policy.log_std());
  }
  return total / static_cast<double>(observations.size());
}

}  // namespace dppo::policy
