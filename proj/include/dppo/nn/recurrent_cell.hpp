#ifndef DPPO_NN_RECURRENT_CELL_HPP_
#define DPPO_NN_RECURRENT_CELL_HPP_

#include <span>
#include <vector>

#include "dppo/nn/param_vector.hpp"
#include "dppo/rng.hpp"

namespace dppo::nn {

// LSTM cell with gates ordered (input, forget, output, candidate).
// Flat layout: [Wx (4h x in), Wh (4h x h), b (4h)].
class RecurrentCell {
 public:
  struct State {
    Vector h;
    Vector c;
    bool operator==(const State&) const = default;
  };

  struct StepTape {
    Vector x, h_prev, c_prev;
    Vector i, f, o, g;  // post-nonlinearity gate values
    Vector c, tanh_c;
  };

  // One truncated-BPTT window.
  struct WindowTape {
    std::vector<StepTape> steps;
    bool recorded = false;
  };

  RecurrentCell() = default;
  RecurrentCell(std::size_t input_dim, std::size_t hidden);

  // Uniform(+-1/sqrt(in + h)) weights; forget-gate bias set to
  // `forget_bias`, other biases zero.
  void init(CounterRng& rng, double forget_bias = 1.0);

  std::size_t input_dim() const { return in_; }
  std::size_t hidden() const { return hid_; }
  std::size_t param_count() const { return params_.size(); }
  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }
  const ParamLayout& layout() const { return layout_; }
  ParamVector flatten(std::uint64_t version = 0) const;
  void unflatten(const ParamVector& p);

  State zero_state() const;

  // Advances `state` by one input and returns the new hidden vector.
  Vector step(std::span<const double> x, State& state) const;
  const Vector& step(std::span<const double> x, State& state, StepTape& tape) const;

  // Runs up to K steps from `state` (updated in place), recording into
  // `tape`; throws ShapeError if inputs.size() > K.
  std::vector<Vector> unroll(std::span<const Vector> inputs, State& state,
                             WindowTape& tape, std::size_t K) const;

  // Backpropagates dL/dh_t for every step of the window. Gradient does not
  // flow into the window's initial state. `dx`, if non-null, receives the
  // input gradients per step.
  void backward_window(const WindowTape& tape, std::span<const Vector> dh,
                       std::span<double> grad, std::vector<Vector>* dx = nullptr) const;

 private:
  std::size_t in_ = 0;
  std::size_t hid_ = 0;
  Vector params_;
  ParamLayout layout_;
};

// Free-function form: unrolls `inputs` from `state`. Throws ShapeError when
// the sequence is longer than the window K.
std::vector<Vector> recurrent_unroll(const RecurrentCell& cell,
                                     std::span<const Vector> inputs,
                                     RecurrentCell::State& state, std::size_t K,
                                     RecurrentCell::WindowTape* tape = nullptr);

}  // namespace dppo::nn

#endif  // DPPO_NN_RECURRENT_CELL_HPP_
