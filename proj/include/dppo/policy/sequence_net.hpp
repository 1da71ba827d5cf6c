#ifndef DPPO_POLICY_SEQUENCE_NET_HPP_
#define DPPO_POLICY_SEQUENCE_NET_HPP_

#include <span>
#include <vector>

#include "dppo/nn/dense_net.hpp"
#include "dppo/nn/recurrent_cell.hpp"
#include "dppo/policy/encoder.hpp"

namespace dppo::policy {

struct NetSpec {
  EncoderSpec encoder;
  std::size_t lstm_units = 0;  // 0: feedforward
  std::size_t output_dim = 1;
  double output_scale = 1.0;   // init scale of the linear head
  double forget_bias = 1.0;    // initial LSTM forget-gate bias
};

// Recurrent state carried across steps of an episode.
struct Carry {
  nn::RecurrentCell::State rnn;
  bool operator==(const Carry&) const = default;
};

// encoder -> optional LSTM -> linear head. Parameters are laid out as
// [enc.*, rnn.*, head.*].
class SequenceNet {
 public:
  struct WindowTape {
    std::vector<Encoder::Tape> enc;
    nn::RecurrentCell::WindowTape rnn;
    std::vector<nn::DenseTape> head;
    std::vector<Vector> features;
    std::size_t length = 0;
  };

  SequenceNet() = default;
  explicit SequenceNet(const NetSpec& spec);

  void init(CounterRng& rng);
  const NetSpec& spec() const { return spec_; }
  bool recurrent() const { return spec_.lstm_units > 0; }
  std::size_t input_dim() const { return enc_.input_dim(); }
  std::size_t output_dim() const { return spec_.output_dim; }
  std::size_t param_count() const { return layout_.total(); }
  const nn::ParamLayout& layout() const { return layout_; }
  void get_params(std::span<double> out) const;
  void set_params(std::span<const double> in);

  Carry initial_carry() const;

  // One online step; advances `carry`.
  Vector step(std::span<const double> obs, Carry& carry) const;

  // Runs a window from `carry` (copied) and returns per-step outputs.
  // Bitwise identical to calling step() on the same inputs.
  void forward_window(std::span<const Vector> obs, const Carry& carry, WindowTape& tape,
                      std::vector<Vector>& outputs) const;
  // Accumulates parameter gradient for per-step output gradients.
  void backward_window(const WindowTape& tape, std::span<const Vector> d_out,
                       std::span<double> grad) const;

 private:
  NetSpec spec_;
  Encoder enc_;
  nn::RecurrentCell rnn_;
  nn::DenseNet head_;
  nn::ParamLayout layout_;
};

}  // namespace dppo::policy

#endif  // DPPO_POLICY_SEQUENCE_NET_HPP_
