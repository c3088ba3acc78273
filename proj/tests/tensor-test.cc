// tests/tensor-test.cc

// Copyright 2026  The lipmel Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <numeric>

#include "doctest.h"
#include "tensor/archive.h"
#include "tensor/conv.h"
#include "tensor/gradcheck.h"
#include "tensor/layers.h"
#include "tensor/ops.h"

using namespace lipmel;

namespace {

Tensor random_tensor(const Shape& shape, Rng& rng, Real lo = -1, Real hi = 1) {
  std::vector<Real> v(static_cast<std::size_t>(shape_numel(shape)));
  for (Real& x : v) x = static_cast<Real>(rng.uniform(lo, hi));
  return Tensor::from(shape, std::move(v));
}

// Weighted sum with fixed random weights, so every output coordinate matters.
Tensor weighted_sum(const Tensor& y, std::uint64_t seed) {
  Rng rng(seed);
  return ops::sum(ops::mul(y, random_tensor(y.shape(), rng)));
}

}  // namespace

TEST_CASE("matmul hand cases") {
  const Tensor eye = Tensor::from({2, 2}, {1, 0, 0, 1});
  const Tensor m = Tensor::from({2, 2}, {1, 2, 3, 4});
  const Tensor p = ops::matmul(eye, m);
  CHECK(std::vector<Real>(p.data().begin(), p.data().end()) ==
        std::vector<Real>{1, 2, 3, 4});
  const Tensor dotp =
      ops::matmul(Tensor::from({1, 2}, {1, 2}), Tensor::from({2, 1}, {3, 4}));
  CHECK(dotp.item() == 11);
}

TEST_CASE("matmul shape mismatch names both shapes") {
  try {
    ops::matmul(Tensor::zeros({2, 3}), Tensor::zeros({2, 3}));
    FAIL("expected ShapeError");
  } catch (const ShapeError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("[2x3] x [2x3]") != std::string::npos);
  }
}

TEST_CASE("matmul gradient of sum matches row sums of b and finite differences") {
  Rng rng(7);
  Tensor a = random_tensor({3, 4}, rng);
  Tensor b = random_tensor({4, 2}, rng);
  a.set_requires_grad(true);
  ops::sum(ops::matmul(a, b)).backward();
  for (Index i = 0; i < 3; ++i)
    for (Index k = 0; k < 4; ++k)
      CHECK(a.grad()[i * 4 + k] ==
            doctest::Approx(b.at({k, 0}) + b.at({k, 1})).epsilon(1e-12));
  a.zero_grad();
  auto r = gradient_check(
      [&](const Tensor& x) { return ops::sum(ops::matmul(x, b)); }, a, 1e-5);
  CHECK(r.max_rel_error < 1e-6);
}

TEST_CASE("conv3d output arithmetic for the first encoder block") {
  ConvSpec spec;
  spec.kernel = {5, 3, 3};
  spec.stride = {1, 2, 2};
  spec.padding = {2, 0, 0};
  for (Index T : {1, 4, 9}) {
    const auto out = spec.output_extent({T, 112, 112});
    CHECK(out[0] == T);
    CHECK(out[1] == 55);
    CHECK(out[2] == 55);
  }
  CHECK_THROWS_AS(conv_output_length(2, 3, 1, 0), ConfigError);
}

TEST_CASE("conv3d zero weights and unit-kernel scaling") {
  Rng rng(3);
  const Tensor x = random_tensor({1, 3, 5, 5}, rng);
  ConvSpec spec;
  spec.in_channels = 1;
  spec.out_channels = 2;
  spec.kernel = {3, 3, 3};
  spec.padding = {1, 1, 1};
  const Tensor y = ops::conv3d(x, spec, Tensor::zeros({2, 1, 3, 3, 3}),
                               Tensor::zeros({2}));
  for (Real v : y.data()) CHECK(v == 0);

  ConvSpec unit;
  unit.in_channels = 1;
  unit.out_channels = 1;
  const Tensor doubled = ops::conv3d(
      x, unit, Tensor::full({1, 1, 1, 1, 1}, 2), Tensor::zeros({1}));
  CHECK(doubled.shape() == x.shape());
  for (Index i = 0; i < x.numel(); ++i)
    CHECK(doubled.data()[i] == 2 * x.data()[i]);
}

TEST_CASE("conv3d matches a direct loop oracle") {
  Rng rng(11);
  ConvSpec spec;
  spec.in_channels = 2;
  spec.out_channels = 3;
  spec.kernel = {3, 2, 3};
  spec.stride = {1, 2, 1};
  spec.padding = {1, 0, 1};
  const Tensor x = random_tensor({2, 4, 5, 6}, rng);
  const Tensor w = random_tensor({3, 2, 3, 2, 3}, rng);
  const Tensor b = random_tensor({3}, rng);
  const Tensor y = ops::conv3d(x, spec, w, b);
  const auto ext = spec.output_extent({4, 5, 6});
  REQUIRE(y.shape() == Shape{3, ext[0], ext[1], ext[2]});
  for (Index o = 0; o < 3; ++o)
    for (Index t = 0; t < ext[0]; ++t)
      for (Index h = 0; h < ext[1]; ++h)
        for (Index v = 0; v < ext[2]; ++v) {
          double acc = b.data()[o];
          for (Index c = 0; c < 2; ++c)
            for (Index kt = 0; kt < 3; ++kt)
              for (Index kh = 0; kh < 2; ++kh)
                for (Index kw = 0; kw < 3; ++kw) {
                  const Index ti = t - 1 + kt, hi = 2 * h + kh,
                              wi = v - 1 + kw;
                  if (ti < 0 || ti >= 4 || wi < 0 || wi >= 6) continue;
                  acc += w.at({o, c, kt, kh, kw}) * x.at({c, ti, hi, wi});
                }
          CHECK(y.at({o, t, h, v}) == doctest::Approx(acc).epsilon(1e-12));
        }
}

TEST_CASE("maxpool3d geometry, ties and argmax routing") {
  PoolSpec pool;
  pool.window = {1, 2, 2};
  pool.stride = {1, 2, 2};
  CHECK(pool.output_extent({3, 55, 55}) == std::array<Index, 3>{3, 27, 27});

  const Tensor small = Tensor::from({1, 1, 2, 2}, {1, 5, 3, 2});
  CHECK(ops::maxpool3d(small, pool).item() == 5);

  Tensor constant = Tensor::full({1, 1, 4, 4}, 0.25);
  constant.set_requires_grad(true);
  const Tensor y = ops::maxpool3d(constant, pool);
  for (Real v : y.data()) CHECK(v == 0.25);
  ops::sum(y).backward();
  for (Index h = 0; h < 4; ++h)
    for (Index w = 0; w < 4; ++w)
      CHECK(constant.grad()[h * 4 + w] == ((h % 2 == 0 && w % 2 == 0) ? 1 : 0));

  PoolSpec too_big;
  too_big.window = {1, 5, 5};
  CHECK_THROWS_AS(ops::maxpool3d(small, too_big), ConfigError);
}

TEST_CASE("batchnorm train and eval modes") {
  Rng rng(5);
  const Tensor x = random_tensor({3, 2, 4}, rng, -3, 5);
  auto stats = BatchNormStats::identity(3);
  const Tensor y = ops::batchnorm(x, Tensor::full({3}, 1), Tensor::zeros({3}),
                                  stats, true);
  for (Index c = 0; c < 3; ++c) {
    double m = 0, v = 0;
    for (Index i = 0; i < 8; ++i) m += y.data()[c * 8 + i];
    m /= 8;
    for (Index i = 0; i < 8; ++i) v += std::pow(y.data()[c * 8 + i] - m, 2);
    v /= 8;
    CHECK(std::abs(m) < 1e-5);
    CHECK(std::abs(v - 1) < 1e-5);
  }
  const Tensor beta = Tensor::from({3}, {0.5, -1, 2});
  const Tensor flat = ops::batchnorm(x, Tensor::zeros({3}), beta, stats, true);
  for (Index c = 0; c < 3; ++c)
    for (Index i = 0; i < 8; ++i) CHECK(flat.data()[c * 8 + i] == beta.data()[c]);

  BatchNormStats fixed{Tensor::from({1}, {0.5}), Tensor::from({1}, {2.0})};
  const Tensor four = Tensor::from({1, 4}, {1, -2, 3, 0.25});
  const Tensor e = ops::batchnorm(four, Tensor::from({1}, {1.5}),
                                  Tensor::from({1}, {-0.25}), fixed, false);
  for (Index i = 0; i < 4; ++i) {
    const double expect =
        (four.data()[i] - 0.5) / std::sqrt(2.0 + 1e-5) * 1.5 - 0.25;
    CHECK(e.data()[i] == doctest::Approx(expect).epsilon(1e-14));
  }

  auto one = BatchNormStats::identity(2);
  CHECK_THROWS_AS(ops::batchnorm(Tensor::zeros({2, 1}), Tensor::full({2}, 1),
                                 Tensor::zeros({2}), one, true),
                  ShapeError);
}

TEST_CASE("running statistics follow momentum 0.1") {
  auto stats = BatchNormStats::identity(1);
  const Tensor x = Tensor::from({1, 4}, {1, 2, 3, 6});
  ops::batchnorm(x, Tensor::full({1}, 1), Tensor::zeros({1}), stats, true);
  CHECK(stats.mean.data()[0] == doctest::Approx(0.1 * 3.0));
  // unbiased variance of {1,2,3,6} is 14/3
  CHECK(stats.var.data()[0] == doctest::Approx(0.9 + 0.1 * 14.0 / 3.0));
}

namespace {

// Straight-line scalar LSTM for the oracle check.
void scalar_lstm(const std::vector<double>& x, const std::vector<double>& h0,
                 const std::vector<double>& c0, const LstmWeights& w,
                 std::vector<double>& h, std::vector<double>& c) {
  const std::size_t H = h0.size(), I = x.size();
  auto sig = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
  h.assign(H, 0);
  c.assign(H, 0);
  for (std::size_t j = 0; j < H; ++j) {
    double pre[4];
    for (std::size_t gate = 0; gate < 4; ++gate) {
      const std::size_t row = gate * H + j;
      double s = w.bias.data()[row];
      for (std::size_t k = 0; k < I; ++k) s += w.w_ih.data()[row * I + k] * x[k];
      for (std::size_t k = 0; k < H; ++k) s += w.w_hh.data()[row * H + k] * h0[k];
      pre[gate] = s;
    }
    const double ig = sig(pre[0]), fg = sig(pre[1]), gg = std::tanh(pre[2]),
                 og = sig(pre[3]);
    c[j] = fg * c0[j] + ig * gg;
    h[j] = og * std::tanh(c[j]);
  }
}

}  // namespace

TEST_CASE("lstm cell: zero weights give zero state") {
  LstmWeights w{Tensor::zeros({8, 3}), Tensor::zeros({8, 2}), Tensor::zeros({8})};
  const auto s = ops::lstm_cell(Tensor::from({1, 3}, {1, -2, 3}),
                                LstmState::zeros(2), w);
  for (Real v : s.h.data()) CHECK(v == 0);
  for (Real v : s.c.data()) CHECK(v == 0);
}

TEST_CASE("lstm cell matches a scalar reimplementation") {
  Rng rng(21);
  LstmWeights w{random_tensor({8, 3}, rng), random_tensor({8, 2}, rng),
                random_tensor({8}, rng)};
  const std::vector<double> x{0.3, -0.7, 1.1}, h0{0.2, -0.4}, c0{-0.5, 0.9};
  const LstmState prev{Tensor::from({1, 2}, {h0[0], h0[1]}),
                       Tensor::from({1, 2}, {c0[0], c0[1]})};
  const auto s = ops::lstm_cell(Tensor::from({1, 3}, {x[0], x[1], x[2]}), prev, w);
  std::vector<double> h, c;
  scalar_lstm(x, h0, c0, w, h, c);
  for (int j = 0; j < 2; ++j) {
    CHECK(s.h.data()[j] == doctest::Approx(h[j]).epsilon(1e-14));
    CHECK(s.c.data()[j] == doctest::Approx(c[j]).epsilon(1e-14));
  }
}

TEST_CASE("lstm cell gradient of |h|^2 against finite differences") {
  Rng rng(22);
  LstmWeights w{random_tensor({12, 4}, rng), random_tensor({12, 3}, rng),
                random_tensor({12}, rng)};
  const Tensor x = random_tensor({1, 4}, rng);
  const LstmState prev{random_tensor({1, 3}, rng), random_tensor({1, 3}, rng)};
  auto loss = [&] {
    const auto s = ops::lstm_cell(x, prev, w);
    return ops::sum(ops::mul(s.h, s.h));
  };
  auto r = gradient_check(loss,
                          {{"w_ih", w.w_ih},
                           {"w_hh", w.w_hh},
                           {"bias", w.bias},
                           {"x", x},
                           {"h0", prev.h},
                           {"c0", prev.c}},
                          1e-5);
  CHECK(r.max_rel_error < 1e-4);
}

TEST_CASE("activations") {
  const Tensor u = ops::softmax(Tensor::from({3}, {0, 0, 0}), 0);
  for (Real v : u.data()) CHECK(v == doctest::Approx(1.0 / 3));
  const Tensor r = ops::relu(Tensor::from({2}, {-3, 3}));
  CHECK(r.data()[0] == 0);
  CHECK(r.data()[1] == 3);
  const Tensor big = ops::softmax(Tensor::from({2}, {1000, 1000}), 0);
  CHECK(big.data()[0] == 0.5);
  CHECK(big.data()[1] == 0.5);
}

TEST_CASE("softmax rows are probability vectors (property)") {
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const Index rows = 1 + static_cast<Index>(rng.below(4));
    const Index cols = 1 + static_cast<Index>(rng.below(8));
    const Real spread = static_cast<Real>(rng.uniform(0.1, 50));
    const Tensor x = random_tensor({rows, cols}, rng, -spread, spread);
    const int axis = static_cast<int>(rng.below(2));
    const Tensor s = ops::softmax(x, axis);
    const Index outer = axis == 0 ? cols : rows;
    const Index len = axis == 0 ? rows : cols;
    for (Index o = 0; o < outer; ++o) {
      double total = 0;
      for (Index j = 0; j < len; ++j) {
        const Real v = axis == 0 ? s.at({j, o}) : s.at({o, j});
        CHECK(v >= 0);
        total += v;
      }
      CHECK(std::abs(total - 1) < 1e-6);
    }
  }
}

TEST_CASE("backward basics and fan-out accumulation") {
  Tensor x = Tensor::from({3}, {1, 2, 3});
  x.set_requires_grad(true);
  ops::sum(x).backward();
  for (Real g : x.grad()) CHECK(g == 1);
  x.zero_grad();
  ops::sum(ops::add(x, x)).backward();
  for (Real g : x.grad()) CHECK(g == 2);
  CHECK_THROWS_AS(ops::scale(x, 2).backward(), ShapeError);
}

TEST_CASE("shared subexpression gradient equals the sum over paths") {
  Rng rng(4);
  Tensor x = random_tensor({2, 3}, rng);
  x.set_requires_grad(true);
  const Tensor w = random_tensor({3, 3}, rng);
  // y = tanh(x) feeds two branches.
  const Tensor y = ops::tanh(x);
  const Tensor l1 = ops::sum(ops::matmul(y, w));
  const Tensor l2 = ops::sum(ops::mul(y, y));
  ops::add(l1, l2).backward();
  std::vector<Real> both(x.grad().begin(), x.grad().end());

  std::vector<Real> summed(6, 0);
  for (int path = 0; path < 2; ++path) {
    x.zero_grad();
    const Tensor yy = ops::tanh(x);
    const Tensor l = path == 0 ? ops::sum(ops::matmul(yy, w))
                               : ops::sum(ops::mul(yy, yy));
    l.backward();
    for (int i = 0; i < 6; ++i) summed[i] += x.grad()[i];
  }
  for (int i = 0; i < 6; ++i)
    CHECK(both[i] == doctest::Approx(summed[i]).epsilon(1e-14));
}

TEST_CASE("graph order is topological and visits each node once") {
  Tensor x = Tensor::from({2}, {0.5, -0.5});
  x.set_requires_grad(true);
  const Tensor a = ops::tanh(x);
  const Tensor b = ops::add(a, a);
  const Tensor c = ops::sum(ops::mul(b, a));
  Graph g(c);
  CHECK(g.size() == 4);
  std::vector<const TensorImpl*> seen;
  for (const TensorImpl* t : g.order()) {
    for (const auto& in : t->node->inputs)
      if (in->node)
        CHECK(std::find(seen.begin(), seen.end(), in.get()) != seen.end());
    CHECK(std::find(seen.begin(), seen.end(), t) == seen.end());
    seen.push_back(t);
  }
}

TEST_CASE("gradient_check on closed forms") {
  Tensor x = Tensor::from({2}, {1, 2});
  auto r = gradient_check(
      [](const Tensor& v) { return ops::sum(ops::mul(v, v)); }, x, 1e-5);
  CHECK(r.max_rel_error < 1e-8);
  x.zero_grad();
  ops::sum(ops::mul(x, x)).backward();
  CHECK(x.grad()[0] == 2);
  CHECK(x.grad()[1] == 4);

  auto c = gradient_check(
      [](const Tensor&) { return Tensor::scalar(3.0); }, Tensor::from({2}, {1, 2}),
      1e-5);
  CHECK(c.max_rel_error == 0);
}

TEST_CASE("every primitive passes gradient check at small dims") {
  Rng rng(2024);
  const Real eps = 1e-5;
  SUBCASE("linear") {
    const Tensor x = random_tensor({3, 5}, rng), w = random_tensor({4, 5}, rng),
                 b = random_tensor({4}, rng);
    auto r = gradient_check(
        [&] { return weighted_sum(ops::linear(x, w, b), 1); },
        {{"x", x}, {"w", w}, {"b", b}}, eps);
    CHECK(r.max_rel_error < 1e-4);
  }
  SUBCASE("conv3d") {
    ConvSpec spec;
    spec.in_channels = 2;
    spec.out_channels = 3;
    spec.kernel = {3, 3, 2};
    spec.stride = {1, 2, 1};
    spec.padding = {1, 0, 1};
    const Tensor x = random_tensor({2, 3, 7, 5}, rng);
    const Tensor w = random_tensor({3, 2, 3, 3, 2}, rng);
    const Tensor b = random_tensor({3}, rng);
    auto r = gradient_check(
        [&] { return weighted_sum(ops::conv3d(x, spec, w, b), 2); },
        {{"x", x}, {"w", w}, {"b", b}}, eps);
    CHECK(r.max_rel_error < 1e-4);
  }
  SUBCASE("conv1d") {
    const Tensor x = random_tensor({2, 8}, rng), w = random_tensor({3, 2, 5}, rng),
                 b = random_tensor({3}, rng);
    auto r = gradient_check(
        [&] { return weighted_sum(ops::conv1d(x, w, b, 1, 2), 3); },
        {{"x", x}, {"w", w}, {"b", b}}, eps);
    CHECK(r.max_rel_error < 1e-4);
  }
  SUBCASE("maxpool3d") {
    const Tensor x = random_tensor({2, 2, 6, 6}, rng);
    PoolSpec pool;
    pool.window = {1, 2, 2};
    pool.stride = {1, 2, 2};
    auto r = gradient_check(
        [&](const Tensor& v) { return weighted_sum(ops::maxpool3d(v, pool), 4); },
        x, eps);
    CHECK(r.max_rel_error < 1e-4);
  }
  SUBCASE("batchnorm train") {
    const Tensor x = random_tensor({3, 6}, rng), g = random_tensor({3}, rng),
                 b = random_tensor({3}, rng);
    auto stats = BatchNormStats::identity(3);
    auto r = gradient_check(
        [&] { return weighted_sum(ops::batchnorm(x, g, b, stats, true), 5); },
        {{"x", x}, {"gamma", g}, {"beta", b}}, eps);
    CHECK(r.max_rel_error < 1e-4);
  }
  SUBCASE("activations and softmax") {
    const Tensor x = random_tensor({3, 4}, rng, -2, 2);
    for (auto kind : {ops::Activation::kTanh, ops::Activation::kSigmoid,
                      ops::Activation::kRelu}) {
      auto r = gradient_check(
          [&](const Tensor& v) { return weighted_sum(ops::activation(v, kind), 6); },
          x, eps);
      CHECK(r.max_rel_error < 1e-4);
    }
    for (int axis : {0, 1}) {
      auto r = gradient_check(
          [&](const Tensor& v) { return weighted_sum(ops::softmax(v, axis), 7); },
          x, eps);
      CHECK(r.max_rel_error < 1e-4);
    }
  }
  SUBCASE("shape plumbing") {
    const Tensor a = random_tensor({2, 3}, rng), b = random_tensor({2, 2}, rng);
    auto r = gradient_check(
        [&] {
          const Tensor cat = ops::concat({a, b}, 1);
          const Tensor t = ops::transpose(ops::slice(cat, 1, 1, 3));
          return weighted_sum(ops::reshape(t, {6}), 8);
        },
        {{"a", a}, {"b", b}}, eps);
    CHECK(r.max_rel_error < 1e-4);
    const Tensor v = random_tensor({2, 3, 2, 2}, rng);
    auto r2 = gradient_check(
        [&](const Tensor& x) { return weighted_sum(ops::channels_to_time(x), 9); },
        v, eps);
    CHECK(r2.max_rel_error < 1e-4);
  }
}

TEST_CASE("backward fault hook corrupts the named rule") {
  Rng rng(1);
  const Tensor x = random_tensor({2, 3}, rng), w = random_tensor({4, 3}, rng);
  detail::set_backward_fault("linear");
  auto r = gradient_check([&] { return weighted_sum(ops::linear(x, w), 1); },
                          {{"w", w}}, 1e-5);
  detail::set_backward_fault("");
  CHECK(r.max_rel_error > 0.1);
}

TEST_CASE("dropout is inverted and identity when inactive") {
  Rng rng(8);
  const Tensor x = Tensor::full({1000}, 1.0);
  CHECK(ops::dropout(x, 0.5, rng, false).impl() == x.impl());
  const Tensor y = ops::dropout(x, 0.25, rng, true);
  for (Real v : y.data()) CHECK((v == 0 || v == doctest::Approx(1 / 0.75)));
}

TEST_CASE("xavier uniform bound, determinism and variance") {
  CHECK(xavier_bound({3, 3}, 1) == doctest::Approx(1.0));
  Rng a(42), b(42);
  const Tensor t1 = xavier_uniform({3, 3}, 1, a);
  const Tensor t2 = xavier_uniform({3, 3}, 1, b);
  for (Index i = 0; i < 9; ++i) {
    CHECK(t1.data()[i] == t2.data()[i]);
    CHECK(std::abs(t1.data()[i]) <= 1.0);
  }
  Rng c(5);
  const Tensor big = xavier_uniform({200, 500}, 1, c);
  double m = 0, v = 0;
  for (Real x : big.data()) m += x;
  m /= big.numel();
  for (Real x : big.data()) v += (x - m) * (x - m);
  v /= big.numel();
  const double expected = 2.0 / (200 + 500);  // b^2 / 3
  CHECK(std::abs(v - expected) / expected < 0.05);
  CHECK_THROWS_AS(xavier_bound({5}, 1), ShapeError);
}

TEST_CASE("archive round trip is bit exact") {
  Rng rng(77);
  Archive a;
  a.config_hash = fnv1a64("k = v\n");
  a.config_text = "k = v\n";
  const Tensor t = random_tensor({2, 3, 4}, rng, -1e3, 1e3);
  a.put_tensor("layer.weight", t);
  a.put_bytes("rng", "state bytes \x01\x02");
  a.put_i64("step", -12345);
  a.put_f64("best", 0.125);
  const auto bytes = a.serialize();
  const Archive b = Archive::parse(bytes);
  CHECK(b.serialize() == bytes);
  CHECK(b.config_hash == a.config_hash);
  const Tensor u = b.get_tensor("layer.weight");
  CHECK(u.shape() == t.shape());
  CHECK(std::equal(u.data().begin(), u.data().end(), t.data().begin()));
  CHECK(b.get_i64("step") == -12345);
  CHECK(b.get_f64("best") == 0.125);
  CHECK(b.get_bytes("rng") == std::string("state bytes \x01\x02"));
  auto broken = bytes;
  broken.resize(broken.size() - 3);
  CHECK_THROWS_AS(Archive::parse(broken), ParseError);
}
