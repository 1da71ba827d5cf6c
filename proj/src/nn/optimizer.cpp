#include "dppo/nn/optimizer.hpp"

#include <cmath>

#include "dppo/binary_io.hpp"
#include "dppo/errors.hpp"

namespace dppo::nn {
namespace {

void check_grads(const ParamVector& params, const ParamVector& grads) {
  require_shape(params.size() == grads.size(), "optimizer: gradient size mismatch");
  for (double g : grads.values) {
    if (!std::isfinite(g)) throw NonFiniteError("optimizer: non-finite gradient coordinate");
  }
}

}  // namespace

AdamState AdamState::for_size(std::size_t n, double lr) {
  AdamState s;
  s.m.assign(n, 0.0);
  s.v.assign(n, 0.0);
  s.lr = lr;
  return s;
}

void AdamState::write(ByteWriter& w) const {
  w.u64(step);
  w.f64(lr);
  w.f64(beta1);
  w.f64(beta2);
  w.f64(eps);
  w.f64_array(m);
  w.f64_array(v);
}

AdamState AdamState::read(ByteReader& r) {
  AdamState s;
  s.step = r.u64();
  s.lr = r.f64();
  s.beta1 = r.f64();
  s.beta2 = r.f64();
  s.eps = r.f64();
  s.m = r.f64_array();
  s.v = r.f64_array();
  if (s.m.size() != s.v.size()) throw FormatError("Adam moment sizes differ");
  return s;
}

void adam_step(ParamVector& params, const ParamVector& grads, AdamState& s) {
  check_grads(params, grads);
  require_shape(s.m.size() == params.size() && s.v.size() == params.size(),
                "adam_step: moment size mismatch");
  s.step += 1;
  const double t = static_cast<double>(s.step);
  const double c1 = 1.0 - std::pow(s.beta1, t);
  const double c2 = 1.0 - std::pow(s.beta2, t);
  for (std::size_t k = 0; k < params.size(); ++k) {
    const double g = grads.values[k];
    s.m[k] = s.beta1 * s.m[k] + (1.0 - s.beta1) * g;
    s.v[k] = s.beta2 * s.v[k] + (1.0 - s.beta2) * g * g;
    const double m_hat = s.m[k] / c1;
    const double v_hat = s.v[k] / c2;
    params.values[k] -= s.lr * m_hat / (std::sqrt(v_hat) + s.eps);
  }
  params.version += 1;
}

void sgd_step(ParamVector& params, const ParamVector& grads, double lr) {
  check_grads(params, grads);
  for (std::size_t k = 0; k < params.size(); ++k) params.values[k] -= lr * grads.values[k];
  params.version += 1;
}

std::string to_string(OptimizerKind k) { return k == OptimizerKind::kAdam ? "adam" : "sgd"; }

OptimizerKind optimizer_from_string(const std::string& s) {
  if (s == "adam") return OptimizerKind::kAdam;
  if (s == "sgd") return OptimizerKind::kSgd;
  throw ConfigError("unknown optimizer '" + s + "' (expected adam|sgd)");
}

void Optimizer::apply(ParamVector& params, const ParamVector& grads) {
  if (kind_ == OptimizerKind::kAdam) {
    adam_step(params, grads, state_);
  } else {
    sgd_step(params, grads, state_.lr);
    state_.step += 1;
  }
}

}  // namespace dppo::nn
