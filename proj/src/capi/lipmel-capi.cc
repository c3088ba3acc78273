// src/capi/lipmel-capi.cc

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

#include "lipmel/lipmel.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "app/commands.h"
#include "base/error.h"
#include "base/kv-config.h"
#include "data/container.h"
#include "tensor/archive.h"

struct lm_config {
  lipmel::KvConfig kv;
};

struct lm_model {
  lipmel::ModelConfig cfg;
  lipmel::LipMelModel model;
  lipmel::data::Preprocessor pre;
  explicit lm_model(const lipmel::ModelConfig& c)
      : cfg(c), model(c), pre(lipmel::app::preprocess_config_for(c)) {}
};

namespace {

thread_local std::string g_last_error;

lm_status fail(lm_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

// Runs `body`, mapping exceptions onto status codes.
template <typename F>
lm_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return LM_OK;
  } catch (const lipmel::MaxStepsError& e) {
    return fail(LM_ERR_MAX_STEPS, e.what());
  } catch (const lipmel::CheckError& e) {
    return fail(LM_ERR_CHECK_FAILED, e.what());
  } catch (const lipmel::NumericError& e) {
    return fail(LM_ERR_NUMERIC, e.what());
  } catch (const lipmel::ConfigError& e) {
    return fail(LM_ERR_CONFIG, e.what());
  } catch (const lipmel::IoError& e) {
    return fail(LM_ERR_IO, e.what());
  } catch (const lipmel::ParseError& e) {
    return fail(LM_ERR_PARSE, e.what());
  } catch (const lipmel::ShapeError& e) {
    return fail(LM_ERR_SHAPE, e.what());
  } catch (const std::bad_alloc&) {
    return fail(LM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(LM_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(LM_ERR_INTERNAL, "unknown error");
  }
}

char* copy_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

}  // namespace

extern "C" {

const char* lm_version(void) { return "1.0.0"; }

const char* lm_status_string(lm_status status) {
  switch (status) {
    case LM_OK: return "ok";
    case LM_ERR_INTERNAL: return "internal error";
    case LM_ERR_CONFIG: return "configuration error";
    case LM_ERR_IO: return "i/o error";
    case LM_ERR_NUMERIC: return "non-finite value";
    case LM_ERR_MAX_STEPS: return "inference reached max steps";
    case LM_ERR_CHECK_FAILED: return "check failed";
    case LM_ERR_PARSE: return "malformed input";
    case LM_ERR_SHAPE: return "shape mismatch";
    case LM_ERR_INVALID_ARGUMENT: return "invalid argument";
  }
  return "unknown status";
}

const char* lm_last_error(void) { return g_last_error.c_str(); }

void lm_free(void* p) { std::free(p); }

lm_status lm_config_create(lm_config** out) {
  if (!out) return fail(LM_ERR_INVALID_ARGUMENT, "lm_config_create: out is NULL");
  return guarded([&] { *out = new lm_config(); });
}

void lm_config_destroy(lm_config* cfg) { delete cfg; }

lm_status lm_config_load_file(lm_config* cfg, const char* path) {
  if (!cfg || !path) return fail(LM_ERR_INVALID_ARGUMENT, "lm_config_load_file: NULL argument");
  return guarded([&] {
    const lipmel::KvConfig file = lipmel::KvConfig::load(path);
    for (const auto& [k, v] : file.values()) cfg->kv.set(k, v);
  });
}

lm_status lm_config_set(lm_config* cfg, const char* key, const char* value) {
  if (!cfg || !key || !value) return fail(LM_ERR_INVALID_ARGUMENT, "lm_config_set: NULL argument");
  return guarded([&] { cfg->kv.set(key, value); });
}

lm_status lm_config_apply(lm_config* cfg, const char* assignment) {
  if (!cfg || !assignment) return fail(LM_ERR_INVALID_ARGUMENT, "lm_config_apply: NULL argument");
  return guarded([&] { cfg->kv.apply_override(assignment); });
}

lm_status lm_config_get(const lm_config* cfg, const char* key, const char** value) {
  if (!cfg || !key || !value) return fail(LM_ERR_INVALID_ARGUMENT, "lm_config_get: NULL argument");
  return guarded([&] {
    const auto& values = cfg->kv.values();
    const auto it = values.find(key);
    *value = it == values.end() ? nullptr : it->second.c_str();
  });
}

lm_status lm_config_validate(const lm_config* cfg) {
  if (!cfg) return fail(LM_ERR_INVALID_ARGUMENT, "lm_config_validate: NULL config");
  return guarded([&] { cfg->kv.require_known(lipmel::app::known_keys()); });
}

lm_status lm_config_to_text(const lm_config* cfg, char** text) {
  if (!cfg || !text) return fail(LM_ERR_INVALID_ARGUMENT, "lm_config_to_text: NULL argument");
  return guarded([&] { *text = copy_string(cfg->kv.to_string()); });
}

lm_status lm_run(const char* command, const lm_config* cfg, lm_line_fn sink, void* user) {
  if (!command || !cfg) return fail(LM_ERR_INVALID_ARGUMENT, "lm_run: NULL argument");
  lipmel::app::CommandIo io;
  if (sink) {
    io.out = [=](const std::string& line) { sink(user, LM_STREAM_OUT, line.c_str()); };
    io.warn = [=](const std::string& line) { sink(user, LM_STREAM_WARN, line.c_str()); };
  }
  const std::string name = command;
  return guarded([&] {
    cfg->kv.require_known(lipmel::app::known_keys());
    if (name == "gendata") {
      lipmel::app::cmd_gendata(cfg->kv, io);
    } else if (name == "train") {
      lipmel::app::cmd_train(cfg->kv, io);
    } else if (name == "synthesize") {
      lipmel::app::cmd_synthesize(cfg->kv, io);
    } else if (name == "evaluate") {
      lipmel::app::cmd_evaluate(cfg->kv, io);
    } else if (name == "gradcheck") {
      lipmel::app::cmd_gradcheck(cfg->kv, io);
    } else if (name == "inspect") {
      lipmel::app::cmd_inspect(cfg->kv, io);
    } else {
      throw lipmel::ConfigError("unknown command '" + name + "'");
    }
  });
}

lm_status lm_model_load(const char* checkpoint_path, lm_model** out) {
  if (!checkpoint_path || !out) return fail(LM_ERR_INVALID_ARGUMENT, "lm_model_load: NULL argument");
  return guarded([&] {
    const lipmel::Archive ar = lipmel::Archive::load(checkpoint_path);
    auto* m = new lm_model(lipmel::ModelConfig::from_text(ar.config_text));
    try {
      m->model.load(ar);
    } catch (...) {
      delete m;
      throw;
    }
    *out = m;
  });
}

void lm_model_destroy(lm_model* model) { delete model; }

lm_status lm_model_info(const lm_model* model, int64_t* parameter_count, int64_t* n_mels,
                        int64_t* frame_size) {
  if (!model) return fail(LM_ERR_INVALID_ARGUMENT, "lm_model_info: NULL model");
  return guarded([&] {
    if (parameter_count) *parameter_count = model->model.parameter_count();
    if (n_mels) *n_mels = model->cfg.n_mels;
    if (frame_size) *frame_size = model->cfg.frame_size;
  });
}

lm_status lm_model_infer(lm_model* model, const char* video_path, uint64_t seed, float** mel,
                         size_t* rows, size_t* cols, lm_stop_reason* stop) {
  if (!model || !video_path || !mel || !rows || !cols)
    return fail(LM_ERR_INVALID_ARGUMENT, "lm_model_infer: NULL argument");
  return guarded([&] {
    const lipmel::Tensor frames = model->pre.frames(lipmel::data::read_container(video_path));
    lipmel::Rng rng(seed);
    const lipmel::DecoderOutput out = model->model.infer(frames, rng);
    const auto data = out.post.data();
    float* buf = static_cast<float*>(std::malloc(std::max<std::size_t>(1, data.size()) * sizeof(float)));
    if (!buf) throw std::bad_alloc();
    for (std::size_t i = 0; i < data.size(); ++i) buf[i] = static_cast<float>(data[i]);
    *mel = buf;
    *rows = static_cast<size_t>(out.post.dim(0));
    *cols = static_cast<size_t>(out.post.dim(1));
    if (stop) {
      switch (out.stop_reason) {
        case lipmel::StopReason::kPeriodDetected: *stop = LM_STOP_PERIOD_DETECTED; break;
        case lipmel::StopReason::kMaxSteps: *stop = LM_STOP_MAX_STEPS; break;
        case lipmel::StopReason::kTargetLength: *stop = LM_STOP_TARGET_LENGTH; break;
      }
    }
  });
}

}  // extern "C"
