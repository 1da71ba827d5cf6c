#include "dppo/policy/encoder.hpp"

#include <algorithm>

#include "dppo/errors.hpp"

namespace dppo::policy {
namespace {

std::vector<std::size_t> stack(std::size_t in, const std::vector<std::size_t>& hidden) {
  std::vector<std::size_t> s{in};
  s.insert(s.end(), hidden.begin(), hidden.end());
  return s;
}

void copy_out(const nn::DenseNet& net, std::span<double> out, std::size_t& off) {
  auto p = net.params();
  std::copy(p.begin(), p.end(), out.begin() + static_cast<std::ptrdiff_t>(off));
  off += p.size();
}

void copy_in(nn::DenseNet& net, std::span<const double> in, std::size_t& off) {
  auto p = net.params();
  std::copy_n(in.begin() + static_cast<std::ptrdiff_t>(off), p.size(), p.begin());
  off += p.size();
}

}  // namespace

TwoStreamEncoder::TwoStreamEncoder(const EncoderSpec& spec)
    : proprio_dim_(spec.proprio_dim), extero_dim_(spec.extero_dim) {
  if (spec.proprio_dim == 0 || spec.extero_dim == 0 || spec.proprio_hidden.empty() ||
      spec.extero_hidden.empty()) {
    throw ConfigError("two-stream encoder needs both streams with at least one hidden layer");
  }
  using nn::Activation;
  proprio_ = nn::DenseNet(stack(spec.proprio_dim, spec.proprio_hidden), Activation::kTanh,
                          Activation::kTanh);
  extero_ = nn::DenseNet(stack(spec.extero_dim, spec.extero_hidden), Activation::kTanh,
                         Activation::kTanh);
  layout_.append("proprio.", proprio_.layout());
  layout_.append("extero.", extero_.layout());
  if (!spec.trunk_hidden.empty()) {
    const std::size_t joined = spec.proprio_hidden.back() + spec.extero_hidden.back();
    trunk_ = nn::DenseNet(stack(joined, spec.trunk_hidden), Activation::kTanh, Activation::kTanh);
    has_trunk_ = true;
    layout_.append("trunk.", trunk_.layout());
  }
}

void TwoStreamEncoder::init(CounterRng& rng) {
  proprio_.init(rng);
  extero_.init(rng);
  if (has_trunk_) trunk_.init(rng);
}

std::size_t TwoStreamEncoder::output_dim() const {
  return has_trunk_ ? trunk_.output_dim() : proprio_.output_dim() + extero_.output_dim();
}

std::size_t TwoStreamEncoder::param_count() const { return layout_.total(); }

void TwoStreamEncoder::get_params(std::span<double> out) const {
  std::size_t off = 0;
  copy_out(proprio_, out, off);
  copy_out(extero_, out, off);
  if (has_trunk_) copy_out(trunk_, out, off);
}

void TwoStreamEncoder::set_params(std::span<const double> in) {
  require_shape(in.size() == param_count(), "TwoStreamEncoder::set_params size");
  std::size_t off = 0;
  copy_in(proprio_, in, off);
  copy_in(extero_, in, off);
  if (has_trunk_) copy_in(trunk_, in, off);
}

const Vector& TwoStreamEncoder::forward(std::span<const double> x, Tape& tape) const {
  require_shape(x.size() == input_dim(), "TwoStreamEncoder::forward: input size");
  const Vector& p = proprio_.forward(x.first(proprio_dim_), tape.proprio);
  const Vector& e = extero_.forward(x.subspan(proprio_dim_, extero_dim_), tape.extero);
  tape.joined.assign(p.begin(), p.end());
  tape.joined.insert(tape.joined.end(), e.begin(), e.end());
  if (!has_trunk_) return tape.joined;
  return trunk_.forward(tape.joined, tape.trunk);
}

void TwoStreamEncoder::backward(const Tape& tape, std::span<const double> d_out,
                                std::span<double> grad) const {
  require_shape(grad.size() == param_count(), "TwoStreamEncoder::backward: gradient size");
  const std::size_t np = proprio_.param_count();
  const std::size_t ne = extero_.param_count();
  Vector d_joined(proprio_.output_dim() + extero_.output_dim());
  if (has_trunk_) {
    trunk_.backward(tape.trunk, d_out, grad.subspan(np + ne), d_joined);
  } else {
    std::copy(d_out.begin(), d_out.end(), d_joined.begin());
  }
  const std::size_t hp = proprio_.output_dim();
  proprio_.backward(tape.proprio, std::span<const double>(d_joined).first(hp),
                    grad.first(np));
  extero_.backward(tape.extero, std::span<const double>(d_joined).subspan(hp),
                   grad.subspan(np, ne));
}

Encoder::Encoder(const EncoderSpec& spec) : spec_(spec) {
  if (spec.input_dim() == 0) throw ConfigError("encoder input dimension is zero");
  if (spec.two_stream()) {
    two_ = TwoStreamEncoder(spec);
    layout_ = two_.layout();
  } else if (!spec.trunk_hidden.empty()) {
    single_ = nn::DenseNet(stack(spec.proprio_dim, spec.trunk_hidden), nn::Activation::kTanh,
                           nn::Activation::kTanh);
    has_single_ = true;
    layout_.append("dense.", single_.layout());
  }
}

void Encoder::init(CounterRng& rng) {
  if (spec_.two_stream()) {
    two_.init(rng);
  } else if (has_single_) {
    single_.init(rng);
  }
}

std::size_t Encoder::output_dim() const {
  if (spec_.two_stream()) return two_.output_dim();
  return has_single_ ? single_.output_dim() : spec_.proprio_dim;
}

std::size_t Encoder::param_count() const { return layout_.total(); }

void Encoder::get_params(std::span<double> out) const {
  if (spec_.two_stream()) {
    two_.get_params(out);
  } else if (has_single_) {
    std::size_t off = 0;
    copy_out(single_, out, off);
  }
}

void Encoder::set_params(std::span<const double> in) {
  require_shape(in.size() == param_count(), "Encoder::set_params size");
  if (spec_.two_stream()) {
    two_.set_params(in);
  } else if (has_single_) {
    std::size_t off = 0;
    copy_in(single_, in, off);
  }
}

const Vector& Encoder::forward(std::span<const double> x, Tape& tape) const {
  require_shape(x.size() == input_dim(), "Encoder::forward: expected input of size " +
                                             std::to_string(input_dim()) + ", got " +
                                             std::to_string(x.size()));
  if (spec_.two_stream()) return two_.forward(x, tape.two);
  if (has_single_) return single_.forward(x, tape.single);
  tape.passthrough.assign(x.begin(), x.end());
  return tape.passthrough;
}

void Encoder::backward(const Tape& tape, std::span<const double> d_out,
                       std::span<double> grad) const {
  if (spec_.two_stream()) {
    two_.backward(tape.two, d_out, grad);
  } else if (has_single_) {
    single_.backward(tape.single, d_out, grad);
  }
}

}  // namespace dppo::policy
