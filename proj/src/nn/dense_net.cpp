#include "dppo/nn/dense_net.hpp"

#include <cmath>
#include <string>

#include "dppo/errors.hpp"

namespace dppo::nn {

DenseNet::DenseNet(std::vector<std::size_t> sizes, Activation hidden, Activation output)
    : sizes_(std::move(sizes)), hidden_(hidden), output_(output) {
  if (sizes_.size() < 2) throw ShapeError("DenseNet needs at least input and output sizes");
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
    if (sizes_[l] == 0 || sizes_[l + 1] == 0) throw ShapeError("DenseNet layer of width 0");
    offsets_.push_back(total);
    const std::size_t w = sizes_[l] * sizes_[l + 1];
    layout_.append("L" + std::to_string(l) + ".W", w);
    layout_.append("L" + std::to_string(l) + ".b", sizes_[l + 1]);
    total += w + sizes_[l + 1];
  }
  params_.assign(total, 0.0);
}

Activation DenseNet::activation(std::size_t layer) const {
  return layer + 1 == num_layers() ? output_ : hidden_;
}

void DenseNet::init(CounterRng& rng, double output_scale) {
  for (std::size_t l = 0; l < num_layers(); ++l) {
    double scale = 1.0 / std::sqrt(static_cast<double>(sizes_[l]));
    if (l + 1 == num_layers()) scale *= output_scale;
    const std::size_t w0 = weight_offset(l);
    const std::size_t nw = sizes_[l] * sizes_[l + 1];
    for (std::size_t k = 0; k < nw; ++k) params_[w0 + k] = rng.uniform(-scale, scale);
    const std::size_t b0 = bias_offset(l);
    for (std::size_t k = 0; k < sizes_[l + 1]; ++k) params_[b0 + k] = 0.0;
  }
}

ParamVector DenseNet::flatten(std::uint64_t version) const {
  return ParamVector{version, params_, layout_};
}

void DenseNet::unflatten(const ParamVector& p) {
  if (!(p.layout == layout_)) throw ShapeError("DenseNet::unflatten: layout mismatch");
  params_ = p.values;
}

void DenseNet::layer_forward(std::size_t l, std::span<const double> in, Vector& out) const {
  const std::size_t n_in = sizes_[l];
  const std::size_t n_out = sizes_[l + 1];
  const double* w = params_.data() + weight_offset(l);
  const double* b = params_.data() + bias_offset(l);
  out.resize(n_out);
  for (std::size_t o = 0; o < n_out; ++o) {
    const double* row = w + o * n_in;
    double acc = b[o];
    for (std::size_t i = 0; i < n_in; ++i) acc += row[i] * in[i];
    out[o] = acc;
  }
  if (activation(l) == Activation::kTanh) {
    for (auto& v : out) v = std::tanh(v);
  }
}

Vector DenseNet::forward(std::span<const double> x) const {
  DenseTape tape;
  return forward(x, tape);
}

const Vector& DenseNet::forward(std::span<const double> x, DenseTape& tape) const {
  require_shape(x.size() == input_dim(),
                "DenseNet::forward: expected input of size " + std::to_string(input_dim()) +
                    ", got " + std::to_string(x.size()));
  tape.acts.resize(num_layers() + 1);
  tape.acts[0].assign(x.begin(), x.end());
  for (std::size_t l = 0; l < num_layers(); ++l) {
    layer_forward(l, tape.acts[l], tape.acts[l + 1]);
  }
  tape.recorded = true;
  return tape.acts.back();
}

void DenseNet::backward(const DenseTape& tape, std::span<const double> dy,
                        std::span<double> grad, std::span<double> dx) const {
  if (!tape.recorded || tape.acts.size() != num_layers() + 1) {
    throw StateError("DenseNet::backward called without a recorded forward pass");
  }
  require_shape(dy.size() == output_dim(), "DenseNet::backward: output gradient size");
  require_shape(grad.size() == param_count(), "DenseNet::backward: gradient buffer size");
  require_shape(dx.empty() || dx.size() == input_dim(), "DenseNet::backward: input gradient size");

  Vector delta(dy.begin(), dy.end());
  Vector prev;
  for (std::size_t l = num_layers(); l-- > 0;) {
    const std::size_t n_in = sizes_[l];
    const std::size_t n_out = sizes_[l + 1];
    const Vector& out = tape.acts[l + 1];
    const Vector& in = tape.acts[l];
    if (activation(l) == Activation::kTanh) {
      for (std::size_t o = 0; o < n_out; ++o) delta[o] *= 1.0 - out[o] * out[o];
    }
    double* gw = grad.data() + weight_offset(l);
    double* gb = grad.data() + bias_offset(l);
    const double* w = params_.data() + weight_offset(l);
    const bool need_input_grad = l > 0 || !dx.empty();
    if (need_input_grad) prev.assign(n_in, 0.0);
    for (std::size_t o = 0; o < n_out; ++o) {
      const double d = delta[o];
      gb[o] += d;
      double* grow = gw + o * n_in;
      for (std::size_t i = 0; i < n_in; ++i) grow[i] += d * in[i];
      if (need_input_grad) {
        const double* row = w + o * n_in;
        for (std::size_t i = 0; i < n_in; ++i) prev[i] += row[i] * d;
      }
    }
    if (need_input_grad) delta.swap(prev);
  }
  if (!dx.empty()) {
    for (std::size_t i = 0; i < dx.size(); ++i) dx[i] = delta[i];
  }
}

}  // namespace dppo::nn
