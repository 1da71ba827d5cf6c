#ifndef DPPO_NN_DENSE_NET_HPP_
#define DPPO_NN_DENSE_NET_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "dppo/nn/param_vector.hpp"
#include "dppo/rng.hpp"

namespace dppo::nn {

enum class Activation : std::uint8_t { kIdentity = 0, kTanh = 1 };

// Activations recorded by a taped forward pass. acts[0] is the input and
// acts[l + 1] the post-activation output of layer l.
struct DenseTape {
  std::vector<Vector> acts;
  bool recorded = false;
};

// Fully connected network. Weights are row-major (out x in), stored with
// the bias of each layer in one flat array:
//   [L0.W, L0.b, L1.W, L1.b, ...]
class DenseNet {
 public:
  DenseNet() = default;
  // `sizes` = {in, h1, ..., out}. Hidden layers use `hidden`, the last
  // layer uses `output`.
  DenseNet(std::vector<std::size_t> sizes, Activation hidden, Activation output);

  // Uniform(-s/sqrt(fan_in), s/sqrt(fan_in)) weights, zero biases; the last
  // layer's scale is multiplied by `output_scale`.
  void init(CounterRng& rng, double output_scale = 1.0);

  std::size_t input_dim() const { return sizes_.empty() ? 0 : sizes_.front(); }
  std::size_t output_dim() const { return sizes_.empty() ? 0 : sizes_.back(); }
  std::size_t num_layers() const { return sizes_.empty() ? 0 : sizes_.size() - 1; }
  std::size_t param_count() const { return params_.size(); }
  const std::vector<std::size_t>& sizes() const { return sizes_; }
  Activation activation(std::size_t layer) const;

  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }
  const ParamLayout& layout() const { return layout_; }
  ParamVector flatten(std::uint64_t version = 0) const;
  void unflatten(const ParamVector& p);

  Vector forward(std::span<const double> x) const;
  // Records activations into `tape` and returns a reference to the output.
  const Vector& forward(std::span<const double> x, DenseTape& tape) const;

  // Accumulates d(loss)/d(params) into `grad` (size param_count()). If `dx`
  // is non-empty it receives d(loss)/d(input).
  void backward(const DenseTape& tape, std::span<const double> dy,
                std::span<double> grad, std::span<double> dx = {}) const;

 private:
  std::size_t weight_offset(std::size_t layer) const { return offsets_[layer]; }
  std::size_t bias_offset(std::size_t layer) const {
    return offsets_[layer] + sizes_[layer] * sizes_[layer + 1];
  }
  void layer_forward(std::size_t l, std::span<const double> in, Vector& out) const;

  std::vector<std::size_t> sizes_;
  std::vector<std::size_t> offsets_;
  Activation hidden_ = Activation::kTanh;
  Activation output_ = Activation::kIdentity;
  Vector params_;
  ParamLayout layout_;
};

}  // namespace dppo::nn

#endif  // DPPO_NN_DENSE_NET_HPP_
