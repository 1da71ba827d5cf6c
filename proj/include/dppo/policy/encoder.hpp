#ifndef DPPO_POLICY_ENCODER_HPP_
#define DPPO_POLICY_ENCODER_HPP_

#include <span>
#include <vector>

#include "dppo/nn/dense_net.hpp"

namespace dppo::policy {

using nn::Vector;

// Architecture of the observation encoder. With extero_dim == 0 the
// observation passes through a single tanh stack (`trunk_hidden`, possibly
// empty). Otherwise the first proprio_dim inputs feed the proprioceptive
// stream, the remaining extero_dim inputs the exteroceptive stream, and
// their concatenated outputs feed the trunk.
struct EncoderSpec {
  std::size_t proprio_dim = 0;
  std::size_t extero_dim = 0;
  std::vector<std::size_t> proprio_hidden;
  std::vector<std::size_t> extero_hidden;
  std::vector<std::size_t> trunk_hidden;

  bool two_stream() const { return extero_dim > 0; }
  std::size_t input_dim() const { return proprio_dim + extero_dim; }
};

// Separate subnetworks for body-local and environment features joined by a
// shared trunk. Both streams are evaluated on every call.
class TwoStreamEncoder {
 public:
  struct Tape {
    nn::DenseTape proprio, extero, trunk;
    Vector joined;
  };

  TwoStreamEncoder() = default;
  explicit TwoStreamEncoder(const EncoderSpec& spec);

  void init(CounterRng& rng);
  std::size_t input_dim() const { return proprio_dim_ + extero_dim_; }
  std::size_t output_dim() const;
  std::size_t param_count() const;
  const nn::ParamLayout& layout() const { return layout_; }
  void get_params(std::span<double> out) const;
  void set_params(std::span<const double> in);

  const Vector& forward(std::span<const double> x, Tape& tape) const;
  void backward(const Tape& tape, std::span<const double> d_out, std::span<double> grad) const;

 private:
  std::size_t proprio_dim_ = 0;
  std::size_t extero_dim_ = 0;
  nn::DenseNet proprio_, extero_;
  nn::DenseNet trunk_;
  bool has_trunk_ = false;
  nn::ParamLayout layout_;
};

// Either a single dense stack or a TwoStreamEncoder.
class Encoder {
 public:
  struct Tape {
    nn::DenseTape single;
    TwoStreamEncoder::Tape two;
    Vector passthrough;
  };

  Encoder() = default;
  explicit Encoder(const EncoderSpec& spec);

  void init(CounterRng& rng);
  std::size_t input_dim() const { return spec_.input_dim(); }
  std::size_t output_dim() const;
  std::size_t param_count() const;
  const nn::ParamLayout& layout() const { return layout_; }
  void get_params(std::span<double> out) const;
  void set_params(std::span<const double> in);

  const Vector& forward(std::span<const double> x, Tape& tape) const;
  void backward(const Tape& tape, std::span<const double> d_out, std::span<double> grad) const;

 private:
  EncoderSpec spec_;
  nn::DenseNet single_;
  bool has_single_ = false;
  TwoStreamEncoder two_;
  nn::ParamLayout layout_;
};

}  // namespace dppo::policy

#endif  // DPPO_POLICY_ENCODER_HPP_
