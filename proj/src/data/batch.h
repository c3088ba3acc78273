// src/data/batch.h

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

#ifndef LIPMEL_DATA_BATCH_H_
#define LIPMEL_DATA_BATCH_H_

#include <string>
#include <vector>

#include "data/preprocess.h"
#include "tensor/tensor.h"

namespace lipmel::data {

struct Batch {
  std::vector<std::string> ids;
  Tensor frames;  // [B x C x T_max x S x S], zero padded
  Tensor mels;    // [B x m_max x n_mels], zero padded
  std::vector<Index> frame_lengths;
  std::vector<Index> mel_lengths;
  std::vector<std::vector<bool>> frame_mask;  // [B][T_max]
  std::vector<std::vector<bool>> mel_mask;    // [B][m_max]

  Index size() const { return static_cast<Index>(ids.size()); }
  // Un-padded tensors of clip b, [C x T x S x S] and [m x n_mels].
  Tensor clip_frames(Index b) const;
  Tensor clip_mel(Index b) const;
};

// Pads to the per-batch maxima. With `sort`, clips are ordered by
// descending mel length (stable).
Batch batch_collate(const std::vector<const PreparedClip*>& clips, bool sort = true);

// Mean squared error over real (unmasked) mel entries of padded
// predictions [B x m_max x n_mels].
Tensor masked_mse(const Tensor& pred, const Batch& batch);

}  // namespace lipmel::data

#endif  // LIPMEL_DATA_BATCH_H_
