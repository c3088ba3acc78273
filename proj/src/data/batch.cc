// src/data/batch.cc

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

#include "data/batch.h"

#include <algorithm>
#include <numeric>

#include "base/error.h"
#include "tensor/ops.h"

namespace lipmel::data {

Batch batch_collate(const std::vector<const PreparedClip*>& clips, bool sort) {
  if (clips.empty()) throw ShapeError("batch_collate: no clips");
  std::vector<std::size_t> order(clips.size());
  std::iota(order.begin(), order.end(), 0);
  if (sort)
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return clips[a]->mel.dim(0) > clips[b]->mel.dim(0);
    });
  const Shape& f0 = clips[0]->frames.shape();
  const Index C = f0[0], S = f0[2], M = clips[0]->mel.dim(1);
  Index t_max = 0, m_max = 0;
  for (const auto* c : clips) {
    if (c->frames.dim(0) != C || c->frames.dim(2) != S || c->frames.dim(3) != S ||
        c->mel.dim(1) != M)
      throw ShapeError("batch_collate: clip '" + c->id + "' has mismatched geometry");
    t_max = std::max(t_max, c->frames.dim(1));
    m_max = std::max(m_max, c->mel.dim(0));
  }
  const Index B = static_cast<Index>(clips.size());
  Batch b;
  std::vector<Real> frames(static_cast<std::size_t>(B * C * t_max * S * S), 0);
  std::vector<Real> mels(static_cast<std::size_t>(B * m_max * M), 0);
  for (Index i = 0; i < B; ++i) {
    const PreparedClip& c = *clips[order[static_cast<std::size_t>(i)]];
    const Index T = c.frames.dim(1), m = c.mel.dim(0);
    b.ids.push_back(c.id);
    b.frame_lengths.push_back(T);
    b.mel_lengths.push_back(m);
    std::vector<bool> fm(static_cast<std::size_t>(t_max), false), mm(static_cast<std::size_t>(m_max), false);
    std::fill(fm.begin(), fm.begin() + T, true);
    std::fill(mm.begin(), mm.begin() + m, true);
    b.frame_mask.push_back(fm);
    b.mel_mask.push_back(mm);
    const auto src = c.frames.data();
    for (Index ch = 0; ch < C; ++ch)
      std::copy(src.begin() + ch * T * S * S, src.begin() + (ch + 1) * T * S * S,
                frames.begin() + ((i * C + ch) * t_max) * S * S);
    std::copy(c.mel.data().begin(), c.mel.data().end(), mels.begin() + i * m_max * M);
  }
  b.frames = Tensor::from({B, C, t_max, S, S}, std::move(frames));
  b.mels = Tensor::from({B, m_max, M}, std::move(mels));
  return b;
}

Tensor Batch::clip_frames(Index i) const {
  const Index C = frames.dim(1), t_max = frames.dim(2), S = frames.dim(3);
  const Index T = frame_lengths.at(static_cast<std::size_t>(i));
  std::vector<Real> out(static_cast<std::size_t>(C * T * S * S));
  const auto src = frames.data();
  for (Index ch = 0; ch < C; ++ch)
    std::copy(src.begin() + ((i * C + ch) * t_max) * S * S,
              src.begin() + ((i * C + ch) * t_max + T) * S * S, out.begin() + ch * T * S * S);
  return Tensor::from({C, T, S, S}, std::move(out));
}

Tensor Batch::clip_mel(Index i) const {
  const Index m_max = mels.dim(1), M = mels.dim(2);
  const Index m = mel_lengths.at(static_cast<std::size_t>(i));
  const auto src = mels.data();
  return Tensor::from({m, M}, std::vector<Real>(src.begin() + i * m_max * M,
                                                src.begin() + (i * m_max + m) * M));
}

Tensor masked_mse(const Tensor& pred, const Batch& batch) {
  if (pred.shape() != batch.mels.shape())
    throw ShapeError("masked_mse: prediction " + shape_str(pred.shape()) + " vs batch " +
                     shape_str(batch.mels.shape()));
  const Index B = pred.dim(0), m_max = pred.dim(1), M = pred.dim(2);
  std::vector<Real> mask(static_cast<std::size_t>(pred.numel()), 0);
  Index count = 0;
  for (Index b = 0; b < B; ++b)
    for (Index t = 0; t < batch.mel_lengths[static_cast<std::size_t>(b)]; ++t)
      for (Index k = 0; k < M; ++k, ++count) mask[static_cast<std::size_t>((b * m_max + t) * M + k)] = 1;
  const Tensor w = Tensor::from(pred.shape(), std::move(mask));
  const Tensor diff = ops::mul(ops::sub(pred, batch.mels), w);
  return ops::scale(ops::sum(ops::mul(diff, diff)), Real(1) / static_cast<Real>(count));
}

}  // namespace lipmel::data
