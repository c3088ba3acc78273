// src/app/commands.h

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

#ifndef LIPMEL_APP_COMMANDS_H_
#define LIPMEL_APP_COMMANDS_H_

#include <functional>
#include <string>
#include <vector>

#include "base/kv-config.h"
#include "data/preprocess.h"
#include "dsp/audio.h"
#include "model/lipmel-model.h"

namespace lipmel::app {

// Line sinks for command output. Unset sinks discard.
struct CommandIo {
  std::function<void(const std::string&)> out;
  std::function<void(const std::string&)> warn;
};

// Every key a command accepts: model.*, train.*, synth.* and the per-command
// flag keys (gendata.out, train.data, synthesize.video, ...).
std::vector<std::string> known_keys();

// ModelConfig from model.preset (standard | reduced | micro, default
// standard) followed by individual model.* overrides.
ModelConfig model_config_from(const KvConfig& kv, const std::string& default_preset = "standard");

// Preprocessing matched to a model: frame size, channel count and mel bins.
data::PreprocessConfig preprocess_config_for(const ModelConfig& cfg);

// Loads and preprocesses every clip of a manifest, in manifest order.
std::vector<data::PreparedClip> prepare_manifest(const std::string& manifest_path,
                                                 const data::Preprocessor& pre);

struct Synthesis {
  DecoderOutput decoded;
  dsp::AudioSignal audio;
};

// infer -> exp -> mel pseudo-inverse -> Griffin-Lim.
Synthesis synthesize(LipMelModel& model, const Tensor& frames, const data::Preprocessor& pre,
                     int griffin_lim_iterations, std::uint64_t seed);

// Commands. Failures are thrown as the error classes of base/error.h.
void cmd_gendata(const KvConfig& kv, const CommandIo& io);
void cmd_train(const KvConfig& kv, const CommandIo& io);
void cmd_synthesize(const KvConfig& kv, const CommandIo& io);
void cmd_evaluate(const KvConfig& kv, const CommandIo& io);
void cmd_gradcheck(const KvConfig& kv, const CommandIo& io);
void cmd_inspect(const KvConfig& kv, const CommandIo& io);

}  // namespace lipmel::app

#endif  // LIPMEL_APP_COMMANDS_H_
