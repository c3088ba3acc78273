// tests/model-test.cc

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

#include "base/rng.h"
#include "doctest.h"
#include "model/config.h"
#include "model/lipmel-model.h"
#include "tensor/gradcheck.h"
#include "tensor/ops.h"

using namespace lipmel;

namespace {

Tensor random_tensor(const Shape& shape, Rng& rng, Real lo = -1, Real hi = 1) {
  Tensor t = Tensor::zeros(shape);
  for (Real& v : t.mutable_data()) v = rng.uniform(lo, hi);
  return t;
}

Tensor param(const LipMelModel& m, const std::string& name) {
  for (const auto& [n, t] : m.parameters())
    if (n == name) return t;
  FAIL("no parameter " << name);
  return Tensor();
}

void randomize(LipMelModel& m, Rng& rng, Real scale) {
  for (auto& [name, t] : m.parameters())
    for (Real& v : t.mutable_data()) v = rng.uniform(-scale, scale);
}

Real sigmoid(Real x) { return 1 / (1 + std::exp(-x)); }

// Scalar LSTM step on plain vectors; gate order i, f, g, o.
void lstm_ref(const std::vector<Real>& x, std::vector<Real>& h, std::vector<Real>& c,
              const Tensor& w_ih, const Tensor& w_hh, const Tensor& b) {
  const std::size_t H = h.size(), in = x.size();
  std::vector<Real> z(4 * H);
  for (std::size_t r = 0; r < 4 * H; ++r) {
    Real s = b.data()[r];
    for (std::size_t k = 0; k < in; ++k) s += w_ih.data()[r * in + k] * x[k];
    for (std::size_t k = 0; k < H; ++k) s += w_hh.data()[r * H + k] * h[k];
    z[r] = s;
  }
  for (std::size_t k = 0; k < H; ++k) {
    const Real i = sigmoid(z[k]), f = sigmoid(z[H + k]), g = std::tanh(z[2 * H + k]),
               o = sigmoid(z[3 * H + k]);
    c[k] = f * c[k] + i * g;
    h[k] = o * std::tanh(c[k]);
  }
}

ModelConfig scalar_config() {
  ModelConfig c = ModelConfig::micro();
  c.encoder_lstm = 1;  // d_enc = 2
  c.attention_lstm = 1;
  c.decoder_lstm = 1;
  c.attention_dim = 2;
  c.location_channels = 1;
  c.location_kernel = 3;
  c.prenet_hidden = 2;
  c.prenet_out = 2;
  c.n_mels = 3;
  return c;
}

}  // namespace

TEST_CASE("standard encoder geometry") {
  const ModelConfig cfg = ModelConfig::standard();
  CHECK(cfg.spatial_trace() == std::vector<Index>{112, 55, 27, 13, 6, 4, 2});
  CHECK(cfg.flatten_dim() == 512);
  CHECK(cfg.encoder_dim() == 256);
  LipMelModel model(cfg);
  Rng rng(1);
  const Tensor one = random_tensor({1, 1, 112, 112}, rng, 0, 1);
  const Memory m = model.encode(one, RunMode::eval(), rng);
  CHECK(m.h.shape() == Shape{1, 256});
  CHECK(m.proj.shape() == Shape{1, 128});
  CHECK_THROWS_AS(model.encode(random_tensor({1, 2, 96, 96}, rng), RunMode::eval(), rng),
                  ShapeError);
}

TEST_CASE("reduced and micro geometry") {
  CHECK(ModelConfig::reduced().flatten_dim() == 32 * 2 * 2);
  const ModelConfig micro = ModelConfig::micro();
  CHECK(micro.spatial_trace() == std::vector<Index>{8, 6, 3, 3, 3, 3, 1});
  CHECK(micro.flatten_dim() == 4);
}

TEST_CASE("encoder keeps the time length") {
  LipMelModel model(ModelConfig::micro());
  Rng rng(2);
  for (Index T = 1; T <= 50; ++T) {
    const Memory m = model.encode(random_tensor({1, T, 8, 8}, rng, 0, 1), RunMode::eval(), rng);
    REQUIRE(m.h.shape() == Shape{T, 8});
  }
}

TEST_CASE("zero recurrent weights give a zero encoding") {
  LipMelModel model(ModelConfig::micro());
  for (auto& [name, t] : model.parameters())
    if (name.rfind("encoder.lstm", 0) == 0)
      for (Real& v : t.mutable_data()) v = 0;
  Rng rng(3);
  const Memory m = model.encode(Tensor::zeros({1, 4, 8, 8}), RunMode::eval(), rng);
  for (Real v : m.h.data()) CHECK(v == 0);
}

TEST_CASE("config text round trip and validation") {
  for (const auto& cfg : {ModelConfig::standard(), ModelConfig::reduced(), ModelConfig::micro()}) {
    const ModelConfig back = ModelConfig::from_text(cfg.to_text());
    CHECK(back.to_text() == cfg.to_text());
    CHECK(back.hash() == cfg.hash());
  }
  CHECK(ModelConfig::standard().hash() != ModelConfig::reduced().hash());
  ModelConfig bad = ModelConfig::standard();
  bad.blocks[1].padding = {1, 0, 0};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = ModelConfig::standard();
  bad.prenet_dropout = 1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  CHECK_THROWS_AS(ModelConfig::from_text("model.unknown = 3\n"), ConfigError);
  CHECK_THROWS_AS(ModelConfig::from_text("model.n_mels = eighty\n"), ConfigError);
}

TEST_CASE("one-hot alignment selects a memory row exactly") {
  ModelConfig cfg = ModelConfig::micro();
  LipMelModel model(cfg);
  Rng rng(4);
  const Index n = 5, k = 3;
  Memory mem;
  mem.h = random_tensor({n, cfg.encoder_dim()}, rng);
  std::vector<Real> proj(static_cast<std::size_t>(n * cfg.attention_dim), -100);
  for (Index j = 0; j < cfg.attention_dim; ++j) proj[static_cast<std::size_t>(k * cfg.attention_dim + j)] = 100;
  mem.proj = Tensor::from({n, cfg.attention_dim}, proj);
  for (Real& v : param(model, "attention.energy").mutable_data()) v = 1000;
  AttentionState s = model.initial_attention(mem);
  const auto out = model.attention_step(mem, s, Tensor::zeros({1, cfg.prenet_out}));
  for (Index j = 0; j < n; ++j) CHECK(out.alignment.data()[j] == (j == k ? 1.0 : 0.0));
  for (Index j = 0; j < cfg.encoder_dim(); ++j)
    CHECK(out.context.data()[j] == mem.h.data()[k * cfg.encoder_dim() + j]);
}

TEST_CASE("zero energy weights give a uniform alignment") {
  ModelConfig cfg = ModelConfig::micro();
  LipMelModel model(cfg);
  for (Real& v : param(model, "attention.energy").mutable_data()) v = 0;
  Rng rng(5);
  Memory mem;
  mem.h = random_tensor({4, cfg.encoder_dim()}, rng);
  mem.proj = random_tensor({4, cfg.attention_dim}, rng);
  AttentionState s = model.initial_attention(mem);
  const auto out = model.attention_step(mem, s, random_tensor({1, cfg.prenet_out}, rng));
  for (Real v : out.alignment.data()) CHECK(v == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("attention and decoder step match a straight-line oracle") {
  const ModelConfig cfg = scalar_config();
  LipMelModel model(cfg);
  Rng rng(6);
  randomize(model, rng, 0.8);
  const Index n = 3;
  Memory mem;
  mem.h = random_tensor({n, 2}, rng);
  const Tensor M = param(model, "attention.memory");
  mem.proj = ops::linear(mem.h, M);
  AttentionState s = model.initial_attention(mem);
  LstmState ds = model.initial_decoder();
  const Tensor p = random_tensor({1, 2}, rng);

  // Two steps through the model.
  std::vector<AttentionOutput> outs;
  std::vector<Tensor> frames;
  for (int step = 0; step < 2; ++step) {
    outs.push_back(model.attention_step(mem, s, p));
    frames.push_back(model.decode_step(outs.back().context, outs.back().query, ds));
  }

  // Oracle.
  auto P = [&](const char* name) { return param(model, name); };
  const Tensor Q = P("attention.query"), L = P("attention.location"),
               F = P("attention.location_conv"), W = P("attention.energy");
  std::vector<Real> a_prev{1, 0, 0}, a_cum{0, 0, 0}, ctx{0, 0};
  std::vector<Real> ah{0}, ac{0}, dh{0}, dc{0};
  auto h = [&](Index j, Index k) { return mem.h.data()[j * 2 + k]; };
  for (int step = 0; step < 2; ++step) {
    lstm_ref({ctx[0], ctx[1], p.data()[0], p.data()[1]}, ah, ac, P("attention.lstm.w_ih"),
             P("attention.lstm.w_hh"), P("attention.lstm.bias"));
    std::vector<Real> e(3);
    for (Index j = 0; j < n; ++j) {
      // Location feature: one channel, kernel 3, padding 1 over (a_prev, a_cum).
      Real y = 0;
      for (Index r = 0; r < 3; ++r) {
        const Index src = j + r - 1;
        if (src < 0 || src >= n) continue;
        y += F.data()[0 * 3 + r] * a_prev[src] + F.data()[1 * 3 + r] * a_cum[src];
      }
      Real energy = 0;
      for (Index u = 0; u < 2; ++u) {
        const Real mh = M.data()[u * 2] * h(j, 0) + M.data()[u * 2 + 1] * h(j, 1);
        energy += W.data()[u] * std::tanh(mh + Q.data()[u] * ah[0] + L.data()[u] * y);
      }
      e[j] = energy;
    }
    const Real mx = std::max({e[0], e[1], e[2]});
    Real z = 0;
    for (Real& v : e) z += (v = std::exp(v - mx));
    for (Index j = 0; j < n; ++j) {
      a_prev[j] = e[j] / z;
      a_cum[j] += a_prev[j];
    }
    ctx = {0, 0};
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < 2; ++k) ctx[k] += a_prev[j] * h(j, k);
    lstm_ref({ctx[0], ctx[1], ah[0]}, dh, dc, P("decoder.lstm.w_ih"), P("decoder.lstm.w_hh"),
             P("decoder.lstm.bias"));
    for (Index j = 0; j < n; ++j)
      CHECK(outs[step].alignment.data()[j] == doctest::Approx(a_prev[j]).epsilon(1e-12));
    for (Index k = 0; k < 2; ++k)
      CHECK(outs[step].context.data()[k] == doctest::Approx(ctx[k]).epsilon(1e-12));
    const Tensor Wp = P("decoder.projection.weight"), bp = P("decoder.projection.bias");
    for (Index c = 0; c < 3; ++c)
      CHECK(frames[step].data()[c] ==
            doctest::Approx(Wp.data()[c] * dh[0] + bp.data()[c]).epsilon(1e-12));
  }
}

TEST_CASE("zero decoder weights give a zero frame of fixed width") {
  ModelConfig cfg = ModelConfig::micro();
  LipMelModel model(cfg);
  for (auto& [name, t] : model.parameters())
    if (name.rfind("decoder.", 0) == 0)
      for (Real& v : t.mutable_data()) v = 0;
  Rng rng(7);
  LstmState st = model.initial_decoder();
  const Tensor f = model.decode_step(random_tensor({1, cfg.encoder_dim()}, rng),
                                     random_tensor({1, cfg.attention_lstm}, rng), st);
  CHECK(f.shape() == Shape{1, cfg.n_mels});
  for (Real v : f.data()) CHECK(v == 0);
}

TEST_CASE("postnet starts as the identity and keeps length") {
  LipMelModel model(ModelConfig::micro());
  Rng rng(8);
  const Tensor dec = random_tensor({6, 8}, rng);
  const Tensor post = model.postnet(dec, RunMode::train());
  for (Index i = 0; i < dec.numel(); ++i) CHECK(post.data()[i] == dec.data()[i]);
  const Tensor one = model.postnet(random_tensor({1, 8}, rng), RunMode::eval());
  CHECK(one.shape() == Shape{1, 8});
}

TEST_CASE("postnet gradient check") {
  LipMelModel model(ModelConfig::micro());
  Rng rng(9);
  randomize(model, rng, 0.5);
  Tensor dec = random_tensor({2, 8}, rng);
  std::vector<std::pair<std::string, Tensor>> params{{"dec", dec}};
  for (auto& [name, t] : model.parameters())
    if (name.rfind("postnet.", 0) == 0) params.emplace_back(name, t);
  for (auto& [name, t] : params) t.set_requires_grad(true);
  const Tensor target = random_tensor({2, 8}, rng);
  const auto r = gradient_check(
      [&] { return ops::mse(model.postnet(dec, RunMode::eval()), target); }, params, 1e-5, 1e-6);
  MESSAGE("postnet max rel error " << r.max_rel_error << " at " << r.worst_param << " " << r.analytic << " vs " << r.numeric);
  CHECK(r.max_rel_error < 1e-4);
}

TEST_CASE("teacher forcing feeds the shifted target") {
  ModelConfig cfg = ModelConfig::micro();
  cfg.max_decoder_steps = 3;
  LipMelModel model(cfg);
  Rng data(10);
  const Tensor frames = random_tensor({1, 4, 8, 8}, data, 0, 1);
  const Tensor target = random_tensor({6, 8}, data);
  Rng r1(11);
  const auto out = model.forward_teacher_forced(frames, target, RunMode::eval(), {1.0}, r1);
  CHECK(out.steps() == 6);
  CHECK(out.alignments.shape() == Shape{6, 4});
  CHECK(out.post.shape() == Shape{6, 8});

  Rng r2(11);
  const Memory mem = model.encode(frames, RunMode::eval(), r2);
  AttentionState s = model.initial_attention(mem);
  LstmState ds = model.initial_decoder();
  for (Index t = 0; t < 6; ++t) {
    const Tensor prev =
        t == 0 ? Tensor::zeros({1, 8}) : ops::slice(target, 0, t - 1, 1);
    const auto a = model.attention_step(mem, s, model.prenet(prev, r2));
    const Tensor f = model.decode_step(a.context, a.query, ds);
    for (Index c = 0; c < 8; ++c) REQUIRE(out.dec.data()[t * 8 + c] == f.data()[c]);
  }
}

TEST_CASE("attention rows are simplices and the cumulative sum is exact") {
  ModelConfig cfg = ModelConfig::micro();
  cfg.prenet_dropout = 0.5;
  LipMelModel model(cfg);
  Rng rng(12);
  randomize(model, rng, 1.0);
  for (int trial = 0; trial < 4; ++trial) {
    const Index n = 3 + trial * 4;
    Memory mem = model.encode(random_tensor({1, n, 8, 8}, rng, 0, 1), RunMode::eval(), rng);
    AttentionState s = model.initial_attention(mem);
    std::vector<Real> running(static_cast<std::size_t>(n), 0);
    for (int step = 0; step < 25; ++step) {
      const auto o = model.attention_step(mem, s, model.prenet(random_tensor({1, 8}, rng), rng));
      Real total = 0;
      for (Real v : o.alignment.data()) {
        CHECK(v >= 0);
        total += v;
      }
      CHECK(std::abs(total - 1) < 1e-6);
      for (Index j = 0; j < n; ++j) {
        running[static_cast<std::size_t>(j)] += o.alignment.data()[j];
        REQUIRE(s.a_cum.data()[j] == running[static_cast<std::size_t>(j)]);
      }
    }
  }
}

TEST_CASE("inference falls back to the step cap") {
  ModelConfig cfg = ModelConfig::micro();
  cfg.max_decoder_steps = 5;
  cfg.prenet_dropout = 0.5;
  LipMelModel model(cfg);
  Rng rng(13);
  const auto out = model.infer(random_tensor({1, 6, 8, 8}, rng, 0, 1), rng);
  CHECK(out.steps() == 5);
  CHECK(out.stop_reason == StopReason::kMaxSteps);
  CHECK(std::string(stop_reason_name(out.stop_reason)) == "max-steps");
  for (Real s : alignment_row_sums(out.alignments)) CHECK(std::abs(s - 1) < 1e-6);
  CHECK_FALSE(out.dec.requires_grad());
}

TEST_CASE("inference stops on the period frame") {
  ModelConfig cfg = ModelConfig::micro();
  LipMelModel model(cfg);
  Rng rng(14);
  // With a single encoder position every row puts all its mass on it.
  const Tensor frames = random_tensor({1, 1, 8, 8}, rng, 0, 1);
  const auto out = model.infer(frames, rng);
  CHECK(out.stop_reason == StopReason::kPeriodDetected);
  CHECK(out.steps() == cfg.stop_consecutive);
}

TEST_CASE("loss examples and loop oracle") {
  Rng rng(15);
  const Tensor t = random_tensor({4, 80}, rng);
  CHECK(mel_loss(t, t, t).item() == 0);
  Tensor plus = t.clone();
  for (Real& v : plus.mutable_data()) v += 1;
  CHECK(mel_loss(plus, t, t).item() == doctest::Approx(1.0).epsilon(1e-14));
  const Tensor a = random_tensor({4, 80}, rng), b = random_tensor({4, 80}, rng);
  Real s1 = 0, s2 = 0;
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 80; ++j) {
      s1 += std::pow(a.data()[i * 80 + j] - t.data()[i * 80 + j], 2);
      s2 += std::pow(b.data()[i * 80 + j] - t.data()[i * 80 + j], 2);
    }
  CHECK(std::abs(mel_loss(a, b, t).item() - (s1 + s2) / 320) < 1e-10);
  CHECK_THROWS_AS(mel_loss(random_tensor({3, 80}, rng), a, t), ShapeError);
}

TEST_CASE("full micro model gradient check") {
  LipMelModel model(ModelConfig::micro());
  Rng rng(16);
  randomize(model, rng, 0.6);
  const Tensor frames = random_tensor({1, 3, 8, 8}, rng, 0, 1);
  const Tensor target = random_tensor({2, 8}, rng);
  std::vector<std::pair<std::string, Tensor>> params;
  for (auto& p : model.parameters()) params.push_back(p);
  const auto r = gradient_check(
      [&] {
        Rng local(1);
        const auto out =
            model.forward_teacher_forced(frames, target, RunMode::eval(), {1.0}, local);
        return mel_loss(out.dec, out.post, target);
      },
      params, 1e-4, 1e-6);
  MESSAGE("full model: " << r.coordinates << " coordinates, max rel error "
                         << r.max_rel_error << " at " << r.worst_param << "["
                         << r.worst_index << "] " << r.analytic << " vs " << r.numeric);
  CHECK(r.max_rel_error < 1e-4);
}

TEST_CASE("teacher-forced forward is bitwise reproducible") {
  ModelConfig cfg = ModelConfig::micro();
  cfg.prenet_dropout = 0.5;
  cfg.encoder_dropout = 0.1;
  Rng data(17);
  const Tensor frames = random_tensor({1, 5, 8, 8}, data, 0, 1);
  const Tensor target = random_tensor({7, 8}, data);
  std::vector<Real> first;
  for (int run = 0; run < 2; ++run) {
    LipMelModel model(cfg);
    Rng rng(99);
    const auto out = model.forward_teacher_forced(frames, target, RunMode::train(), {0.7}, rng);
    const auto loss = mel_loss(out.dec, out.post, target);
    std::vector<Real> v(out.post.data().begin(), out.post.data().end());
    v.push_back(loss.item());
    if (run == 0) first = v;
    else CHECK(v == first);
  }
}

TEST_CASE("checkpoint round trip") {
  ModelConfig cfg = ModelConfig::micro();
  LipMelModel a(cfg);
  Rng rng(18);
  randomize(a, rng, 1);
  Archive ar;
  a.save(ar);
  const Archive back = Archive::parse(ar.serialize());
  ModelConfig other = cfg;
  other.seed = 77;
  LipMelModel b(other);
  CHECK_THROWS_AS(b.load(back), ConfigError);
  LipMelModel c(cfg);
  c.load(back);
  const auto pa = a.parameters(), pc = c.parameters();
  for (std::size_t i = 0; i < pa.size(); ++i) {
    const auto da = pa[i].second.data(), dc = pc[i].second.data();
    CHECK(std::equal(da.begin(), da.end(), dc.begin()));
  }
}
