#include <cmath>
#include <vector>

#include "doctest.h"
#include "dppo/binary_io.hpp"
#include "dppo/errors.hpp"
#include "dppo/nn/checkpoint.hpp"
#include "dppo/nn/dense_net.hpp"
#include "dppo/nn/optimizer.hpp"
#include "dppo/nn/recurrent_cell.hpp"
#include "dppo/rng.hpp"
#include "test_util.hpp"

using namespace dppo;
using namespace dppo::nn;
using dppo::testing::max_rel_err;
using dppo::testing::numeric_grad;

namespace {

// Straightforward re-implementation read directly off the storage layout.
Vector naive_forward(const std::vector<std::size_t>& sizes, const Vector& p, Vector x) {
  std::size_t off = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const std::size_t n = sizes[l], m = sizes[l + 1];
    Vector y(m);
    for (std::size_t o = 0; o < m; ++o) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += p[off + o * n + i] * x[i];
      y[o] = s + p[off + n * m + o];
    }
    if (l + 2 < sizes.size()) {
      for (auto& v : y) v = std::tanh(v);
    }
    off += n * m + m;
    x = y;
  }
  return x;
}

Vector random_vec(CounterRng& rng, std::size_t n, double s = 1.0) {
  Vector v(n);
  for (auto& x : v) x = rng.uniform(-s, s);
  return v;
}

}  // namespace

TEST_CASE("dense forward with zero weights returns the output bias") {
  DenseNet net({3, 2}, Activation::kTanh, Activation::kIdentity);
  auto p = net.params();
  p[6] = 0.25;
  p[7] = -1.5;
  const Vector y = net.forward(Vector{9.0, -4.0, 1.0});
  CHECK(y == Vector{0.25, -1.5});
}

TEST_CASE("dense 1x1 direct arithmetic") {
  DenseNet net({1, 1}, Activation::kTanh, Activation::kIdentity);
  net.params()[0] = 2.0;
  CHECK(net.forward(Vector{3.0})[0] == 6.0);
}

TEST_CASE("dense forward matches naive matrix multiply") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    DenseNet net({4, 8, 2}, Activation::kTanh, Activation::kIdentity);
    auto rng = CounterRng::keyed(11, {s});
    net.init(rng);
    for (auto& b : net.params()) b += rng.uniform(-0.1, 0.1);
    const Vector x = random_vec(rng, 4, 2.0);
    const Vector y = net.forward(x);
    const Vector want = naive_forward(net.sizes(), Vector(net.params().begin(), net.params().end()), x);
    for (std::size_t k = 0; k < 2; ++k) CHECK(std::abs(y[k] - want[k]) < 1e-12);
  }
}

TEST_CASE("dense forward rejects the wrong input width") {
  DenseNet net({3, 2}, Activation::kTanh, Activation::kIdentity);
  CHECK_THROWS_AS(net.forward(Vector{1.0, 2.0}), ShapeError);
}

TEST_CASE("dense backward: analytic cases and errors") {
  DenseNet net({1, 1}, Activation::kTanh, Activation::kIdentity);
  net.params()[0] = 0.7;
  DenseTape tape;
  net.forward(Vector{3.0}, tape);
  Vector g(2, 0.0), dx(1, 0.0);
  net.backward(tape, Vector{1.0}, g, dx);
  CHECK(g[0] == 3.0);
  CHECK(g[1] == 1.0);
  CHECK(dx[0] == doctest::Approx(0.7).epsilon(1e-15));

  DenseNet big({3, 5, 2}, Activation::kTanh, Activation::kIdentity);
  auto rng = CounterRng::keyed(3, {});
  big.init(rng);
  DenseTape t2;
  big.forward(Vector{0.1, 0.2, 0.3}, t2);
  Vector gz(big.param_count(), 0.0);
  big.backward(t2, Vector{0.0, 0.0}, gz);
  for (double v : gz) CHECK(v == 0.0);

  DenseTape empty;
  CHECK_THROWS_AS(big.backward(empty, Vector{1.0, 1.0}, gz), StateError);
}

TEST_CASE("dense gradients match finite differences over 100 draws") {
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    auto rng = CounterRng::keyed(101, {s});
    DenseNet net({3, 6, 4, 2}, Activation::kTanh, Activation::kIdentity);
    net.init(rng);
    const Vector x = random_vec(rng, 3, 1.5);
    const Vector w = random_vec(rng, 2);
    auto loss = [&](std::span<const double> p) {
      DenseNet n2 = net;
      std::copy(p.begin(), p.end(), n2.params().begin());
      const Vector y = n2.forward(x);
      return w[0] * y[0] + w[1] * y[1];
    };
    DenseTape tape;
    net.forward(x, tape);
    Vector g(net.param_count(), 0.0), dx(3, 0.0);
    net.backward(tape, w, g, dx);
    const Vector p0(net.params().begin(), net.params().end());
    worst = std::max(worst, max_rel_err(g, numeric_grad(loss, p0)));
    auto loss_x = [&](std::span<const double> xi) {
      const Vector y = net.forward(xi);
      return w[0] * y[0] + w[1] * y[1];
    };
    worst = std::max(worst, max_rel_err(dx, numeric_grad(loss_x, x)));
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("dense flatten round trip and layout serialization") {
  DenseNet net({2, 3, 1}, Activation::kTanh, Activation::kIdentity);
  auto rng = CounterRng::keyed(5, {});
  net.init(rng);
  const ParamVector p = net.flatten(7);
  DenseNet other({2, 3, 1}, Activation::kTanh, Activation::kIdentity);
  other.unflatten(p);
  CHECK(other.flatten(7) == p);
  ByteWriter w;
  p.write(w);
  ByteReader r(w.data());
  CHECK(ParamVector::read(r) == p);
  DenseNet wrong({2, 4, 1}, Activation::kTanh, Activation::kIdentity);
  CHECK_THROWS_AS(wrong.unflatten(p), ShapeError);
}

TEST_CASE("forward is pure: repeated calls are bitwise identical") {
  DenseNet net({4, 8, 2}, Activation::kTanh, Activation::kIdentity);
  auto rng = CounterRng::keyed(9, {});
  net.init(rng);
  const Vector x{0.3, -0.2, 0.9, 1.1};
  CHECK(net.forward(x) == net.forward(x));
  RecurrentCell cell(3, 4);
  cell.init(rng);
  auto s1 = cell.zero_state(), s2 = cell.zero_state();
  const Vector in{0.5, -0.5, 0.1};
  for (int t = 0; t < 5; ++t) CHECK(cell.step(in, s1) == cell.step(in, s2));
  CHECK(s1 == s2);
}

TEST_CASE("recurrent cell with zero parameters outputs zero") {
  RecurrentCell cell(3, 4);
  auto state = cell.zero_state();
  std::vector<Vector> inputs{{1.0, 2.0, 3.0}, {-1.0, 0.5, 2.0}};
  RecurrentCell::WindowTape tape;
  const auto out = cell.unroll(inputs, state, tape, 4);
  for (const auto& h : out) {
    for (double v : h) CHECK(v == 0.0);
  }
}

TEST_CASE("K=1 unroll equals one cell step") {
  RecurrentCell cell(2, 3);
  auto rng = CounterRng::keyed(4, {});
  cell.init(rng);
  auto a = cell.zero_state();
  a.h = {0.1, -0.2, 0.3};
  auto b = a;
  const Vector x{0.4, -0.7};
  const Vector h = cell.step(x, a);
  const auto out = recurrent_unroll(cell, std::vector<Vector>{x}, b, 1);
  CHECK(out.size() == 1);
  CHECK(out[0] == h);
  CHECK(a == b);
  CHECK_THROWS_AS(recurrent_unroll(cell, std::vector<Vector>{x, x}, b, 1), ShapeError);
}

TEST_CASE("recurrent gradients through a 3-step unroll match finite differences") {
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    auto rng = CounterRng::keyed(202, {s});
    RecurrentCell cell(3, 4);
    cell.init(rng);
    for (auto& p : cell.params()) p += rng.uniform(-0.2, 0.2);
    RecurrentCell::State init = cell.zero_state();
    init.h = random_vec(rng, 4, 0.5);
    init.c = random_vec(rng, 4, 0.5);
    std::vector<Vector> xs, ws;
    for (int t = 0; t < 3; ++t) {
      xs.push_back(random_vec(rng, 3));
      ws.push_back(random_vec(rng, 4));
    }
    auto loss_of = [&](const RecurrentCell& c, const std::vector<Vector>& in) {
      auto st = init;
      double l = 0.0;
      for (int t = 0; t < 3; ++t) {
        const Vector h = c.step(in[t], st);
        for (int k = 0; k < 4; ++k) l += ws[t][k] * h[k];
      }
      return l;
    };
    auto loss_p = [&](std::span<const double> p) {
      RecurrentCell c2 = cell;
      std::copy(p.begin(), p.end(), c2.params().begin());
      return loss_of(c2, xs);
    };
    auto st = init;
    RecurrentCell::WindowTape tape;
    cell.unroll(xs, st, tape, 3);
    Vector g(cell.param_count(), 0.0);
    std::vector<Vector> dx;
    cell.backward_window(tape, ws, g, &dx);
    const Vector p0(cell.params().begin(), cell.params().end());
    worst = std::max(worst, max_rel_err(g, numeric_grad(loss_p, p0)));
    // Input gradient at the first step.
    auto loss_x0 = [&](std::span<const double> x0) {
      auto in = xs;
      in[0].assign(x0.begin(), x0.end());
      return loss_of(cell, in);
    };
    worst = std::max(worst, max_rel_err(dx[0], numeric_grad(loss_x0, xs[0])));
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("truncated window touches only its own stored steps") {
  RecurrentCell cell(2, 3);
  auto rng = CounterRng::keyed(8, {});
  cell.init(rng);
  auto st = cell.zero_state();
  RecurrentCell::WindowTape tape;
  std::vector<Vector> xs{{0.1, 0.2}, {0.3, 0.4}, {0.5, 0.6}};
  cell.unroll(xs, st, tape, 3);
  CHECK(tape.steps.size() == 3);
  CHECK(tape.steps[0].x == xs[0]);
  CHECK(tape.steps[2].x == xs[2]);
  RecurrentCell::WindowTape unrecorded;
  Vector g(cell.param_count(), 0.0);
  CHECK_THROWS_AS(cell.backward_window(unrecorded, {}, g), StateError);
}

TEST_CASE("adam: zero gradient leaves parameters and advances the step") {
  ParamVector p{0, {1.0, -2.0, 3.0}, {}};
  p.layout.append("w", 3);
  ParamVector g{0, {0.0, 0.0, 0.0}, p.layout};
  auto st = AdamState::for_size(3, 1e-3);
  adam_step(p, g, st);
  CHECK(p.values == Vector{1.0, -2.0, 3.0});
  CHECK(st.step == 1);
  CHECK(p.version == 1);
}

TEST_CASE("adam: first step with unit gradient moves every coordinate by lr") {
  ParamVector p{0, {0.5, -1.0, 2.0, 0.0}, {}};
  p.layout.append("w", 4);
  ParamVector g{0, Vector(4, 1.0), p.layout};
  auto st = AdamState::for_size(4, 0.001);
  const Vector before = p.values;
  adam_step(p, g, st);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(std::abs((p.values[i] - before[i]) + 0.001) < 1e-12);
  }
  CHECK(st.m.size() == 4);
  CHECK(st.v.size() == 4);
}

TEST_CASE("adam: identical calls are bit identical, non-finite gradients rejected") {
  ParamVector p{3, {0.1, 0.2}, {}};
  p.layout.append("w", 2);
  ParamVector g{3, {0.3, -0.7}, p.layout};
  auto s1 = AdamState::for_size(2, 1e-2);
  auto s2 = s1;
  ParamVector a = p, b = p;
  for (int k = 0; k < 5; ++k) {
    adam_step(a, g, s1);
    adam_step(b, g, s2);
  }
  CHECK(a == b);
  CHECK(s1 == s2);
  CHECK(a.version == 8);

  ParamVector bad = g;
  bad.values[1] = std::nan("");
  const ParamVector before = a;
  const AdamState sbefore = s1;
  CHECK_THROWS_AS(adam_step(a, bad, s1), NonFiniteError);
  CHECK(a == before);
  CHECK(s1 == sbefore);

  ParamVector short_g{0, {1.0}, {}};
  CHECK_THROWS_AS(adam_step(a, short_g, s1), ShapeError);
}

TEST_CASE("optimizer is swappable with plain SGD") {
  ParamVector p{0, {1.0, 2.0}, {}};
  p.layout.append("w", 2);
  ParamVector g{0, {0.5, -1.0}, p.layout};
  Optimizer sgd(optimizer_from_string("sgd"), 2, 0.1);
  sgd.apply(p, g);
  CHECK(p.values[0] == doctest::Approx(0.95).epsilon(1e-15));
  CHECK(p.values[1] == doctest::Approx(2.1).epsilon(1e-15));
  CHECK(p.version == 1);
  CHECK(sgd.state().step == 1);
  CHECK(to_string(OptimizerKind::kAdam) == "adam");
  CHECK_THROWS_AS(optimizer_from_string("rmsprop"), ConfigError);
}

TEST_CASE("checkpoint container round trip and corruption detection") {
  Checkpoint ck;
  DenseNet net({2, 2}, Activation::kTanh, Activation::kIdentity);
  auto rng = CounterRng::keyed(1, {});
  net.init(rng);
  ck.put_params("theta", net.flatten(4));
  ck.put("note", {1, 2, 3});
  const auto bytes = ck.serialize();
  CHECK(std::string(bytes.begin(), bytes.begin() + 8) == "DPPOCKPT");
  const auto back = Checkpoint::deserialize(bytes);
  CHECK(back.get_params("theta") == net.flatten(4));
  CHECK(back.get("note") == std::vector<std::uint8_t>{1, 2, 3});
  auto broken = bytes;
  broken[0] = 'X';
  CHECK_THROWS_AS(Checkpoint::deserialize(broken), FormatError);
  auto truncated = bytes;
  truncated.resize(bytes.size() - 5);
  CHECK_THROWS_AS(Checkpoint::deserialize(truncated), FormatError);
  CHECK_THROWS(back.get("missing"));
}
