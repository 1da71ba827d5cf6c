#include "dppo/nn/recurrent_cell.hpp"

#include <cmath>
#include <string>

#include "dppo/errors.hpp"

namespace dppo::nn {
namespace {

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

RecurrentCell::RecurrentCell(std::size_t input_dim, std::size_t hidden)
    : in_(input_dim), hid_(hidden) {
  if (in_ == 0 || hid_ == 0) throw ShapeError("RecurrentCell with zero width");
  layout_.append("Wx", 4 * hid_ * in_);
  layout_.append("Wh", 4 * hid_ * hid_);
  layout_.append("b", 4 * hid_);
  params_.assign(layout_.total(), 0.0);
}

void RecurrentCell::init(CounterRng& rng, double forget_bias) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(in_ + hid_));
  const std::size_t nw = 4 * hid_ * (in_ + hid_);
  for (std::size_t k = 0; k < nw; ++k) params_[k] = rng.uniform(-scale, scale);
  double* b = params_.data() + nw;
  for (std::size_t k = 0; k < 4 * hid_; ++k) b[k] = 0.0;
  for (std::size_t k = 0; k < hid_; ++k) b[hid_ + k] = forget_bias;
}

ParamVector RecurrentCell::flatten(std::uint64_t version) const {
  return ParamVector{version, params_, layout_};
}

void RecurrentCell::unflatten(const ParamVector& p) {
  if (!(p.layout == layout_)) throw ShapeError("RecurrentCell::unflatten: layout mismatch");
  params_ = p.values;
}

RecurrentCell::State RecurrentCell::zero_state() const {
  return State{Vector(hid_, 0.0), Vector(hid_, 0.0)};
}

Vector RecurrentCell::step(std::span<const double> x, State& state) const {
  StepTape tape;
  return step(x, state, tape);
}

const Vector& RecurrentCell::step(std::span<const double> x, State& state,
                                  StepTape& t) const {
  require_shape(x.size() == in_, "RecurrentCell::step: input size " + std::to_string(x.size()) +
                                     " != " + std::to_string(in_));
  require_shape(state.h.size() == hid_ && state.c.size() == hid_,
                "RecurrentCell::step: state size");
  const std::size_t H = hid_;
  const double* wx = params_.data();
  const double* wh = wx + 4 * H * in_;
  const double* b = wh + 4 * H * H;

  t.x.assign(x.begin(), x.end());
  t.h_prev = state.h;
  t.c_prev = state.c;
  t.i.resize(H);
  t.f.resize(H);
  t.o.resize(H);
  t.g.resize(H);
  t.c.resize(H);
  t.tanh_c.resize(H);

  for (std::size_t gate = 0; gate < 4; ++gate) {
    Vector& out = gate == 0 ? t.i : gate == 1 ? t.f : gate == 2 ? t.o : t.g;
    for (std::size_t k = 0; k < H; ++k) {
      const std::size_t row = gate * H + k;
      double z = b[row];
      const double* rx = wx + row * in_;
      for (std::size_t j = 0; j < in_; ++j) z += rx[j] * t.x[j];
      const double* rh = wh + row * H;
      for (std::size_t j = 0; j < H; ++j) z += rh[j] * t.h_prev[j];
      out[k] = gate == 3 ? std::tanh(z) : sigmoid(z);
    }
  }
  for (std::size_t k = 0; k < H; ++k) {
    t.c[k] = t.f[k] * t.c_prev[k] + t.i[k] * t.g[k];
    t.tanh_c[k] = std::tanh(t.c[k]);
    state.h[k] = t.o[k] * t.tanh_c[k];
  }
  state.c = t.c;
  return state.h;
}

std::vector<Vector> RecurrentCell::unroll(std::span<const Vector> inputs, State& state,
                                          WindowTape& tape, std::size_t K) const {
  require_shape(inputs.size() <= K, "recurrent_unroll: sequence of length " +
                                        std::to_string(inputs.size()) +
                                        " exceeds window K=" + std::to_string(K));
  tape.steps.resize(inputs.size());
  std::vector<Vector> outs;
  outs.reserve(inputs.size());
  for (std::size_t t = 0; t < inputs.size(); ++t) {
    outs.push_back(step(inputs[t], state, tape.steps[t]));
  }
  tape.recorded = true;
  return outs;
}

void RecurrentCell::backward_window(const WindowTape& tape, std::span<const Vector> dh,
                                    std::span<double> grad, std::vector<Vector>* dx) const {
  if (!tape.recorded) throw StateError("RecurrentCell::backward_window without forward");
  require_shape(dh.size() == tape.steps.size(), "backward_window: one dh per step required");
  require_shape(grad.size() == param_count(), "backward_window: gradient buffer size");
  const std::size_t H = hid_;
  const double* wx = params_.data();
  const double* wh = wx + 4 * H * in_;
  double* gwx = grad.data();
  double* gwh = gwx + 4 * H * in_;
  double* gb = gwh + 4 * H * H;

  if (dx) dx->assign(tape.steps.size(), Vector(in_, 0.0));
  Vector dh_next(H, 0.0), dc_next(H, 0.0), dz(4 * H);
  for (std::size_t t = tape.steps.size(); t-- > 0;) {
    const StepTape& s = tape.steps[t];
    require_shape(dh[t].size() == H, "backward_window: dh size");
    for (std::size_t k = 0; k < H; ++k) {
      const double dhk = dh[t][k] + dh_next[k];
      const double d_o = dhk * s.tanh_c[k];
      const double dc = dhk * s.o[k] * (1.0 - s.tanh_c[k] * s.tanh_c[k]) + dc_next[k];
      const double d_i = dc * s.g[k];
      const double d_g = dc * s.i[k];
      const double d_f = dc * s.c_prev[k];
      dc_next[k] = dc * s.f[k];
      dz[k] = d_i * s.i[k] * (1.0 - s.i[k]);
      dz[H + k] = d_f * s.f[k] * (1.0 - s.f[k]);
      dz[2 * H + k] = d_o * s.o[k] * (1.0 - s.o[k]);
      dz[3 * H + k] = d_g * (1.0 - s.g[k] * s.g[k]);
    }
    std::fill(dh_next.begin(), dh_next.end(), 0.0);
    for (std::size_t row = 0; row < 4 * H; ++row) {
      const double d = dz[row];
      gb[row] += d;
      double* gx = gwx + row * in_;
      for (std::size_t j = 0; j < in_; ++j) gx[j] += d * s.x[j];
      double* gh = gwh + row * H;
      for (std::size_t j = 0; j < H; ++j) gh[j] += d * s.h_prev[j];
      const double* rh = wh + row * H;
      for (std::size_t j = 0; j < H; ++j) dh_next[j] += rh[j] * d;
      if (dx) {
        const double* rx = wx + row * in_;
        Vector& dxt = (*dx)[t];
        for (std::size_t j = 0; j < in_; ++j) dxt[j] += rx[j] * d;
      }
    }
  }
}

std::vector<Vector> recurrent_unroll(const RecurrentCell& cell, std::span<const Vector> inputs,
                                     RecurrentCell::State& state, std::size_t K,
                                     RecurrentCell::WindowTape* tape) {
  RecurrentCell::WindowTape local;
  return cell.unroll(inputs, state, tape ? *tape : local, K);
}

}  // namespace dppo::nn
