#ifndef DPPO_NN_OPTIMIZER_HPP_
#define DPPO_NN_OPTIMIZER_HPP_

#include <cstdint>
#include <string>

#include "dppo/nn/param_vector.hpp"

namespace dppo::nn {

struct AdamState {
  Vector m;
  Vector v;
  std::uint64_t step = 0;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-10;

  static AdamState for_size(std::size_t n, double lr);
  void write(ByteWriter& w) const;
  static AdamState read(ByteReader& r);
  bool operator==(const AdamState&) const = default;
};

// Bias-corrected Adam descent step on `params`; increments params.version
// and state.step. Throws NonFiniteError (leaving everything untouched) if any
// gradient coordinate is not finite, ShapeError on size mismatch.
void adam_step(ParamVector& params, const ParamVector& grads, AdamState& state);

// Plain gradient descent with the same rejection rules.
void sgd_step(ParamVector& params, const ParamVector& grads, double lr);

enum class OptimizerKind { kAdam, kSgd };

std::string to_string(OptimizerKind k);
OptimizerKind optimizer_from_string(const std::string& s);

// Config-selectable optimizer. SGD ignores the moment vectors but keeps the
// step counter so versions and checkpoints behave identically.
class Optimizer {
 public:
  Optimizer() = default;
  Optimizer(OptimizerKind kind, std::size_t n, double lr)
      : kind_(kind), state_(AdamState::for_size(n, lr)) {}

  void apply(ParamVector& params, const ParamVector& grads);

  OptimizerKind kind() const { return kind_; }
  const AdamState& state() const { return state_; }
  AdamState& state() { return state_; }

 private:
  OptimizerKind kind_ = OptimizerKind::kAdam;
  AdamState state_;
};

}  // namespace dppo::nn

#endif  // DPPO_NN_OPTIMIZER_HPP_
