// src/app/gradcheck-suite.cc

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

#include "app/gradcheck-suite.h"

#include <algorithm>
#include <cstdio>

#include "base/rng.h"
#include "model/lipmel-model.h"
#include "tensor/conv.h"
#include "tensor/gradcheck.h"
#include "tensor/layers.h"
#include "tensor/ops.h"

namespace lipmel {

namespace {

constexpr Real kEps = Real(1e-5);

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

GradCheckRow make_row(const std::string& name, const GradCheckResult& r, double tol) {
  GradCheckRow row;
  row.name = name;
  row.coordinates = r.coordinates;
  row.max_rel_error = r.max_rel_error;
  row.worst = r.worst_param;
  row.pass = r.max_rel_error < tol;
  return row;
}

GradCheckRow merge(const std::string& name, const std::vector<GradCheckResult>& rs, double tol) {
  GradCheckResult all;
  for (const auto& r : rs) {
    all.coordinates += r.coordinates;
    if (r.max_rel_error >= all.max_rel_error) {
      all.max_rel_error = r.max_rel_error;
      all.worst_param = r.worst_param;
    }
  }
  return make_row(name, all, tol);
}

}  // namespace

std::vector<GradCheckRow> run_gradcheck_suite(const ModelConfig& micro, double tol,
                                              const std::string& fault_op) {
  detail::set_backward_fault(fault_op);
  struct Reset {
    ~Reset() { detail::set_backward_fault(""); }
  } reset;
  Rng rng(2024);
  std::vector<GradCheckRow> rows;

  {
    const Tensor a = random_tensor({3, 4}, rng), b = random_tensor({4, 5}, rng);
    rows.push_back(make_row("matmul",
                            gradient_check([&] { return weighted_sum(ops::matmul(a, b), 1); },
                                           {{"a", a}, {"b", b}}, kEps),
                            tol));
  }
  {
    ConvSpec spec;
    spec.in_channels = 2;
    spec.out_channels = 3;
    spec.kernel = {3, 3, 2};
    spec.stride = {1, 2, 1};
    spec.padding = {1, 0, 1};
    const Tensor x = random_tensor({2, 3, 7, 5}, rng), w = random_tensor({3, 2, 3, 3, 2}, rng),
                 b = random_tensor({3}, rng);
    rows.push_back(make_row(
        "conv3d",
        gradient_check([&] { return weighted_sum(ops::conv3d(x, spec, w, b), 2); },
                       {{"x", x}, {"w", w}, {"b", b}}, kEps),
        tol));
  }
  {
    const Tensor x = random_tensor({2, 8}, rng), w = random_tensor({3, 2, 5}, rng),
                 b = random_tensor({3}, rng);
    rows.push_back(make_row(
        "conv1d",
        gradient_check([&] { return weighted_sum(ops::conv1d(x, w, b, 1, 2), 3); },
                       {{"x", x}, {"w", w}, {"b", b}}, kEps),
        tol));
  }
  {
    const Tensor x = random_tensor({2, 2, 6, 6}, rng);
    PoolSpec pool;
    pool.window = {1, 2, 2};
    pool.stride = {1, 2, 2};
    rows.push_back(make_row(
        "maxpool3d",
        gradient_check([&](const Tensor& v) { return weighted_sum(ops::maxpool3d(v, pool), 4); },
                       x, kEps),
        tol));
  }
  {
    const Tensor x = random_tensor({3, 6}, rng), g = random_tensor({3}, rng),
                 b = random_tensor({3}, rng);
    auto stats = BatchNormStats::identity(3);
    rows.push_back(make_row(
        "batchnorm-train",
        gradient_check([&] { return weighted_sum(ops::batchnorm(x, g, b, stats, true), 5); },
                       {{"x", x}, {"gamma", g}, {"beta", b}}, kEps),
        tol));
  }
  {
    const Index H = 3;
    LstmWeights w{random_tensor({4 * H, 4}, rng), random_tensor({4 * H, H}, rng),
                  random_tensor({4 * H}, rng)};
    const Tensor x = random_tensor({1, 4}, rng);
    const LstmState prev{random_tensor({1, H}, rng), random_tensor({1, H}, rng)};
    rows.push_back(make_row("lstm_cell",
                            gradient_check(
                                [&] {
                                  const LstmState s = ops::lstm_cell(x, prev, w);
                                  return ops::add(weighted_sum(s.h, 6), weighted_sum(s.c, 7));
                                },
                                {{"x", x},
                                 {"h", prev.h},
                                 {"c", prev.c},
                                 {"w_ih", w.w_ih},
                                 {"w_hh", w.w_hh},
                                 {"bias", w.bias}},
                                kEps),
                            tol));
  }
  {
    const Tensor x = random_tensor({3, 4}, rng, -2, 2);
    std::vector<GradCheckResult> rs;
    for (auto kind : {ops::Activation::kTanh, ops::Activation::kSigmoid, ops::Activation::kRelu})
      rs.push_back(gradient_check(
          [&](const Tensor& v) { return weighted_sum(ops::activation(v, kind), 8); }, x, kEps));
    for (int axis : {0, 1})
      rs.push_back(gradient_check(
          [&](const Tensor& v) { return weighted_sum(ops::softmax(v, axis), 9); }, x, kEps));
    rows.push_back(merge("activations", rs, tol));
  }
  {
    const Tensor x = random_tensor({3, 5}, rng), w = random_tensor({4, 5}, rng),
                 b = random_tensor({4}, rng);
    rows.push_back(make_row(
        "linear",
        gradient_check([&] { return weighted_sum(ops::linear(x, w, b), 10); },
                       {{"x", x}, {"w", w}, {"b", b}}, kEps),
        tol));
  }
  {
    ModelConfig cfg = micro;
    cfg.encoder_dropout = 0;
    cfg.prenet_dropout = 0;
    LipMelModel model(cfg);
    Rng init(16);
    for (auto& [name, t] : model.parameters())
      for (Real& v : t.mutable_data()) v = static_cast<Real>(init.uniform(-0.6, 0.6));
    const Tensor frames =
        random_tensor({cfg.input_channels, 3, cfg.frame_size, cfg.frame_size}, rng, 0, 1);
    const Tensor target = random_tensor({2, cfg.n_mels}, rng);
    // Coordinates whose gradient is below 1e-6 sit under the
    // finite-difference roundoff at this step size and are compared
    // absolutely.
    const auto r = gradient_check(
        [&] {
          Rng local(1);
          const auto out =
              model.forward_teacher_forced(frames, target, RunMode::eval(), {1.0}, local);
          return mel_loss(out.dec, out.post, target);
        },
        model.parameters(), Real(1e-4), Real(1e-6));
    rows.push_back(make_row("full-model", r, tol));
  }
  return rows;
}

std::string format_gradcheck_table(const std::vector<GradCheckRow>& rows, double tol) {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-16s %8s %14s  %-6s %s\n", "check", "coords", "max_rel_err",
                "result", "worst");
  out += buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-16s %8lld %14.3e  %-6s %s\n", r.name.c_str(),
                  static_cast<long long>(r.coordinates), r.max_rel_error, r.pass ? "pass" : "FAIL",
                  r.worst.c_str());
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "tolerance %.1e: %s\n", tol,
                std::all_of(rows.begin(), rows.end(), [](const GradCheckRow& r) { return r.pass; })
                    ? "all checks passed"
                    : "FAILED");
  out += buf;
  return out;
}

}  // namespace lipmel
