#include "dppo/policy/sequence_net.hpp"

#include <algorithm>

#include "dppo/errors.hpp"

namespace dppo::policy {

SequenceNet::SequenceNet(const NetSpec& spec) : spec_(spec), enc_(spec.encoder) {
  if (spec.output_dim == 0) throw ConfigError("network output dimension is zero");
  layout_.append("enc.", enc_.layout());
  std::size_t feat = enc_.output_dim();
  if (spec.lstm_units > 0) {
    rnn_ = nn::RecurrentCell(feat, spec.lstm_units);
    layout_.append("rnn.", rnn_.layout());
    feat = spec.lstm_units;
  }
  head_ = nn::DenseNet({feat, spec.output_dim}, nn::Activation::kIdentity,
                       nn::Activation::kIdentity);
  layout_.append("head.", head_.layout());
}

void SequenceNet::init(CounterRng& rng) {
  enc_.init(rng);
  if (recurrent()) rnn_.init(rng, spec_.forget_bias);
  head_.init(rng, spec_.output_scale);
}

void SequenceNet::get_params(std::span<double> out) const {
  require_shape(out.size() == param_count(), "SequenceNet::get_params size");
  const std::size_t ne = enc_.param_count();
  enc_.get_params(out.first(ne));
  std::size_t off = ne;
  if (recurrent()) {
    auto p = rnn_.params();
    std::copy(p.begin(), p.end(), out.begin() + static_cast<std::ptrdiff_t>(off));
    off += p.size();
  }
  auto h = head_.params();
  std::copy(h.begin(), h.end(), out.begin() + static_cast<std::ptrdiff_t>(off));
}

void SequenceNet::set_params(std::span<const double> in) {
  require_shape(in.size() == param_count(), "SequenceNet::set_params size");
  const std::size_t ne = enc_.param_count();
  enc_.set_params(in.first(ne));
  std::size_t off = ne;
  if (recurrent()) {
    auto p = rnn_.params();
    std::copy_n(in.begin() + static_cast<std::ptrdiff_t>(off), p.size(), p.begin());
    off += p.size();
  }
  auto h = head_.params();
  std::copy_n(in.begin() + static_cast<std::ptrdiff_t>(off), h.size(), h.begin());
}

Carry SequenceNet::initial_carry() const {
  Carry c;
  if (recurrent()) c.rnn = rnn_.zero_state();
  return c;
}

Vector SequenceNet::step(std::span<const double> obs, Carry& carry) const {
  Encoder::Tape et;
  const Vector& feat = enc_.forward(obs, et);
  nn::DenseTape ht;
  if (recurrent()) {
    nn::RecurrentCell::StepTape st;
    const Vector& h = rnn_.step(feat, carry.rnn, st);
    return head_.forward(h, ht);
  }
  return head_.forward(feat, ht);
}

void SequenceNet::forward_window(std::span<const Vector> obs, const Carry& carry,
                                 WindowTape& tape, std::vector<Vector>& outputs) const {
  const std::size_t n = obs.size();
  tape.length = n;
  tape.enc.resize(n);
  tape.head.resize(n);
  tape.features.resize(n);
  outputs.resize(n);
  nn::RecurrentCell::State state = carry.rnn;
  if (recurrent()) tape.rnn.steps.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    const Vector& feat = enc_.forward(obs[t], tape.enc[t]);
    if (recurrent()) {
      const Vector& h = rnn_.step(feat, state, tape.rnn.steps[t]);
      tape.features[t] = h;
    } else {
      tape.features[t] = feat;
    }
    outputs[t] = head_.forward(tape.features[t], tape.head[t]);
  }
  tape.rnn.recorded = recurrent();
}

void SequenceNet::backward_window(const WindowTape& tape, std::span<const Vector> d_out,
                                  std::span<double> grad) const {
  require_shape(d_out.size() == tape.length, "SequenceNet::backward_window: one gradient per step");
  require_shape(grad.size() == param_count(), "SequenceNet::backward_window: gradient size");
  const std::size_t ne = enc_.param_count();
  const std::size_t nr = recurrent() ? rnn_.param_count() : 0;
  auto g_enc = grad.first(ne);
  auto g_rnn = grad.subspan(ne, nr);
  auto g_head = grad.subspan(ne + nr);

  std::vector<Vector> d_feat(tape.length);
  for (std::size_t t = 0; t < tape.length; ++t) {
    d_feat[t].assign(head_.input_dim(), 0.0);
    head_.backward(tape.head[t], d_out[t], g_head, d_feat[t]);
  }
  if (recurrent()) {
    std::vector<Vector> d_enc;
    rnn_.backward_window(tape.rnn, d_feat, g_rnn, &d_enc);
    d_feat.swap(d_enc);
  }
  for (std::size_t t = 0; t < tape.length; ++t) {
    enc_.backward(tape.enc[t], d_feat[t], g_enc);
  }
}

}  // namespace dppo::policy
