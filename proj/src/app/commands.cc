// src/app/commands.cc

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

#include "app/commands.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "app/gradcheck-suite.h"
#include "base/error.h"
#include "data/container.h"
#include "data/manifest.h"
#include "data/synth.h"
#include "dsp/mel.h"
#include "metrics/edit-distance.h"
#include "metrics/estoi.h"
#include "metrics/mel-mse.h"
#include "metrics/report.h"
#include "tensor/archive.h"
#include "train/trainer.h"

namespace lipmel::app {

namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kCommandKeys = {
    "model.preset",
    "gendata.out",
    "train.data",
    "train.out",
    "train.resume",
    "train.init",
    "train.allow_config_change",
    "synthesize.checkpoint",
    "synthesize.video",
    "synthesize.out_wav",
    "synthesize.out_mel",
    "synthesize.out_alignment",
    "synthesize.strict",
    "synthesize.griffin_lim_iters",
    "synthesize.seed",
    "evaluate.manifest",
    "evaluate.hyp_dir",
    "evaluate.report",
    "evaluate.strict",
    "gradcheck.fault",
    "gradcheck.tolerance",
    "inspect.path",
};

void emit(const std::function<void(const std::string&)>& sink, const std::string& line) {
  if (sink) sink(line);
}

std::string require(const KvConfig& kv, const std::string& key) {
  const std::string v = kv.get_string(key, "");
  if (v.empty()) throw ConfigError("missing required setting '" + key + "'");
  return v;
}

void make_dirs(const fs::path& dir) {
  if (dir.empty()) return;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path + "'");
}

dsp::MatrixFile to_matrix(const Tensor& t) {
  dsp::MatrixFile m;
  m.rows = static_cast<std::size_t>(t.dim(0));
  m.cols = static_cast<std::size_t>(t.dim(1));
  for (Real v : t.data()) m.values.push_back(static_cast<float>(v));
  return m;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

dsp::MelSpectrogram to_mel(const Tensor& t) {
  dsp::MelSpectrogram m(static_cast<std::size_t>(t.dim(0)), static_cast<std::size_t>(t.dim(1)));
  std::copy(t.data().begin(), t.data().end(), m.values.begin());
  return m;
}

}  // namespace

std::vector<std::string> known_keys() {
  std::vector<std::string> keys = kCommandKeys;
  for (const auto& k : ModelConfig::keys()) keys.push_back(k);
  for (const auto& k : TrainConfig::keys()) keys.push_back(k);
  for (const auto& k : data::SynthSpec::keys()) keys.push_back(k);
  return keys;
}

ModelConfig model_config_from(const KvConfig& kv, const std::string& default_preset) {
  const std::string preset = kv.get_string("model.preset", default_preset);
  ModelConfig cfg;
  if (preset == "standard") {
    cfg = ModelConfig::standard();
  } else if (preset == "reduced") {
    cfg = ModelConfig::reduced();
  } else if (preset == "micro") {
    cfg = ModelConfig::micro();
  } else {
    throw ConfigError("model.preset must be standard, reduced or micro, got '" + preset + "'");
  }
  cfg.read(kv);
  cfg.validate();
  return cfg;
}

data::PreprocessConfig preprocess_config_for(const ModelConfig& cfg) {
  data::PreprocessConfig p;
  p.frame_size = cfg.frame_size;
  p.grayscale = cfg.input_channels == 1;
  p.n_mels = cfg.n_mels;
  return p;
}

std::vector<data::PreparedClip> prepare_manifest(const std::string& manifest_path,
                                                 const data::Preprocessor& pre) {
  const auto records = data::load_manifest(manifest_path);
  const std::string base = data::manifest_dir(manifest_path);
  std::vector<data::PreparedClip> clips;
  clips.reserve(records.size());
  for (const auto& r : records) clips.push_back(pre(r, base));
  return clips;
}

Synthesis synthesize(LipMelModel& model, const Tensor& frames, const data::Preprocessor& pre,
                     int griffin_lim_iterations, std::uint64_t seed) {
  Rng rng(seed);
  Synthesis s;
  s.decoded = model.infer(frames, rng);
  const dsp::MagnitudeSpectrogram mag =
      dsp::mel_to_linear(dsp::exp_mel(to_mel(s.decoded.post)), pre.filterbank(), true);
  dsp::GriffinLimOptions opts;
  opts.iterations = griffin_lim_iterations;
  s.audio = dsp::griffin_lim(mag, pre.config().stft, opts);
  return s;
}

void cmd_gendata(const KvConfig& kv, const CommandIo& io) {
  data::SynthSpec spec;
  spec.read(kv);
  spec.validate();
  const std::string out = require(kv, "gendata.out");
  const auto records = data::synth_generate(spec, out);
  double total = 0;
  for (const auto& r : records) total += r.duration;
  emit(io.out, "generated " + std::to_string(records.size()) + " clips, total duration " +
                   fmt("%.3f", total) + " s, manifest " +
                   data::resolve_path(out, "manifest.jsonl"));
}

void cmd_train(const KvConfig& kv, const CommandIo& io) {
  const ModelConfig model_cfg = model_config_from(kv);
  TrainConfig train_cfg;
  train_cfg.read(kv);
  train_cfg.validate();
  const std::string manifest = require(kv, "train.data");
  const fs::path out = require(kv, "train.out");
  const std::string resume = kv.get_string("train.resume", "");
  const std::string init = kv.get_string("train.init", "");
  if (!resume.empty() && !init.empty())
    throw ConfigError("train.resume and train.init are mutually exclusive");

  const data::Preprocessor pre(preprocess_config_for(model_cfg));
  auto clips = prepare_manifest(manifest, pre);
  const auto n_val = static_cast<std::size_t>(train_cfg.val_clips);
  if (n_val >= clips.size())
    throw ConfigError("train.val_clips leaves no training clips (" + std::to_string(clips.size()) +
                      " in manifest)");
  std::vector<data::PreparedClip> val(clips.end() - static_cast<std::ptrdiff_t>(n_val), clips.end());
  clips.resize(clips.size() - n_val);

  Trainer trainer(model_cfg, train_cfg, std::move(clips), std::move(val));
  if (!resume.empty()) trainer.restore(Archive::load(resume), kv.get_bool("train.allow_config_change", false));
  if (!init.empty()) trainer.load_weights(Archive::load(init));

  make_dirs(out);
  KvConfig merged = kv;
  model_cfg.write(merged);
  train_cfg.write(merged);
  write_text((out / "config.txt").string(), merged.to_string());
  const std::string log_path = (out / "train_log.jsonl").string();
  std::ofstream log(log_path, resume.empty() ? std::ios::trunc : std::ios::app);
  if (!log) throw IoError("cannot write '" + log_path + "'");

  const std::int64_t start = trainer.state().step;
  StepLog last;
  trainer.run([&](const StepLog& l) {
    log << format_step_log(l) << '\n';
    log.flush();
    last = l;
    if (train_cfg.checkpoint_every > 0 && l.step % train_cfg.checkpoint_every == 0) {
      char name[64];
      std::snprintf(name, sizeof name, "checkpoint-%06lld.lmar", static_cast<long long>(l.step));
      trainer.save((out / name).string());
    }
  });
  if (!log) throw IoError("write failed for '" + log_path + "'");
  const std::string final_path = (out / "checkpoint.lmar").string();
  trainer.save(final_path);
  const std::int64_t ran = trainer.state().step - start;
  std::string msg = "ran " + std::to_string(ran) + " steps (total " +
                    std::to_string(trainer.state().step) + "/" +
                    std::to_string(train_cfg.total_steps) + ")";
  if (ran > 0) msg += ", final train loss " + fmt("%.6g", last.train_loss);
  if (trainer.state().stopped_early) msg += ", stopped early";
  emit(io.out, msg);
  emit(io.out, "checkpoint " + final_path);
}

void cmd_synthesize(const KvConfig& kv, const CommandIo& io) {
  const Archive ar = Archive::load(require(kv, "synthesize.checkpoint"));
  const ModelConfig cfg = ModelConfig::from_text(ar.config_text);
  LipMelModel model(cfg);
  model.load(ar);
  const data::Preprocessor pre(preprocess_config_for(cfg));
  const Tensor frames = pre.frames(data::read_container(require(kv, "synthesize.video")));
  const Synthesis s = synthesize(model, frames, pre,
                                 static_cast<int>(kv.get_int("synthesize.griffin_lim_iters", 60)),
                                 static_cast<std::uint64_t>(kv.get_int("synthesize.seed", 1)));

  const std::string wav = require(kv, "synthesize.out_wav");
  make_dirs(fs::path(wav).parent_path());
  dsp::write_wav(wav, s.audio);
  const std::string mel = kv.get_string("synthesize.out_mel", "");
  if (!mel.empty()) dsp::write_matrix(mel, to_matrix(s.decoded.post));
  const std::string align = kv.get_string("synthesize.out_alignment", "");
  if (!align.empty()) dsp::write_matrix(align, to_matrix(s.decoded.alignments));
  emit(io.out, "decoded " + std::to_string(s.decoded.steps()) + " frames over " +
                   std::to_string(frames.dim(1)) + " encoder steps, stop " +
                   stop_reason_name(s.decoded.stop_reason) + ", wrote " + wav + " (" +
                   fmt("%.3f", static_cast<double>(s.audio.samples.size()) / s.audio.sample_rate) +
                   " s)");
  if (s.decoded.stop_reason == StopReason::kMaxSteps) {
    if (kv.get_bool("synthesize.strict", false))
      throw MaxStepsError("inference reached max_decoder_steps (" +
                          std::to_string(cfg.max_decoder_steps) + ") without detecting the period frame");
    emit(io.warn, "warning: inference reached max_decoder_steps without detecting the period frame");
  }
}

void cmd_evaluate(const KvConfig& kv, const CommandIo& io) {
  const std::string manifest = require(kv, "evaluate.manifest");
  const fs::path hyp_dir = require(kv, "evaluate.hyp_dir");
  const std::string report = require(kv, "evaluate.report");
  const bool strict = kv.get_bool("evaluate.strict", false);
  const auto records = data::load_manifest(manifest);
  const std::string base = data::manifest_dir(manifest);
  const data::Preprocessor pre;
  std::vector<metrics::EvalRow> rows;
  std::size_t missing = 0;
  for (const auto& r : records) {
    metrics::EvalRow row;
    row.clip_id = r.id;
    const fs::path hyp_wav = hyp_dir / (r.id + ".wav");
    if (!fs::exists(hyp_wav)) {
      row.status = "missing hypothesis";
      ++missing;
      emit(io.warn, "warning: no hypothesis for clip '" + r.id + "' (" + hyp_wav.string() + ")");
      rows.push_back(row);
      continue;
    }
    const dsp::AudioSignal ref = dsp::read_wav(data::resolve_path(base, r.audio_path));
    const dsp::AudioSignal hyp = dsp::read_wav(hyp_wav.string());
    try {
      row.estoi = metrics::estoi(ref, hyp);
    } catch (const ConfigError& e) {
      row.status = std::string("estoi unavailable: ") + e.what();
    }
    row.mel_mse = metrics::mel_mse(to_mel(pre.mel(ref)), to_mel(pre.mel(hyp)));
    const fs::path hyp_txt = hyp_dir / (r.id + ".txt");
    if (r.transcript && fs::exists(hyp_txt)) {
      std::ifstream in(hyp_txt);
      std::stringstream text;
      text << in.rdbuf();
      row.wer = metrics::wer_cer(*r.transcript, text.str(), metrics::Unit::kWord);
      row.cer = metrics::wer_cer(*r.transcript, text.str(), metrics::Unit::kChar);
    }
    rows.push_back(row);
  }
  make_dirs(fs::path(report).parent_path());
  metrics::write_report(report, rows);
  const auto sum = metrics::summarize(rows);
  std::string msg = "evaluated " + std::to_string(rows.size()) + " clips";
  if (sum.estoi) msg += ", mean estoi " + fmt("%.4f", *sum.estoi);
  if (sum.mel_mse) msg += ", mean mel_mse " + fmt("%.4f", *sum.mel_mse);
  if (sum.wer) msg += ", mean wer " + fmt("%.4f", *sum.wer);
  emit(io.out, msg + ", report " + report);
  if (strict && missing > 0)
    throw IoError(std::to_string(missing) + " clip(s) have no hypothesis");
}

void cmd_gradcheck(const KvConfig& kv, const CommandIo& io) {
  const ModelConfig micro = model_config_from(kv, "micro");
  const double tol = kv.get_double("gradcheck.tolerance", 1e-4);
  const auto rows = run_gradcheck_suite(micro, tol, kv.get_string("gradcheck.fault", ""));
  std::istringstream table(format_gradcheck_table(rows, tol));
  for (std::string line; std::getline(table, line);) emit(io.out, line);
  std::string failed;
  for (const auto& r : rows)
    if (!r.pass) failed += (failed.empty() ? "" : ", ") + r.name;
  if (!failed.empty()) throw CheckError("gradient check failed: " + failed);
}

void cmd_inspect(const KvConfig& kv, const CommandIo& io) {
  const std::string path = require(kv, "inspect.path");
  const auto bytes = read_file_bytes(path);
  auto starts = [&](const char* magic) {
    const std::string m(magic);
    return bytes.size() >= m.size() && std::equal(m.begin(), m.end(), bytes.begin());
  };
  if (starts("LIPMELAR")) {
    const Archive ar = Archive::parse(bytes);
    const ModelConfig cfg = ModelConfig::from_text(ar.config_text);
    LipMelModel model(cfg);
    model.load(ar);
    emit(io.out, "checkpoint " + path);
    emit(io.out, "parameters " + std::to_string(model.parameter_count()));
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(ar.config_hash));
    emit(io.out, std::string("config_hash ") + hash);
    if (ar.has("state/step")) emit(io.out, "step " + std::to_string(ar.get_i64("state/step")));
    std::istringstream text(ar.config_text);
    for (std::string line; std::getline(text, line);) emit(io.out, "  " + line);
  } else if (starts("LMFRAMES")) {
    const auto v = data::decode_container(std::vector<std::uint8_t>(bytes.begin(), bytes.end()));
    emit(io.out, "video " + path + ": " + std::to_string(v.frames) + " frames, " +
                     std::to_string(v.height) + "x" + std::to_string(v.width) + ", " +
                     std::to_string(v.channels) + " channel(s)");
  } else if (starts("RIFF")) {
    const auto a = dsp::decode_wav(std::vector<unsigned char>(bytes.begin(), bytes.end()));
    emit(io.out, "audio " + path + ": " + std::to_string(a.sample_rate) + " Hz, " +
                     std::to_string(a.samples.size()) + " samples (" +
                     fmt("%.3f", static_cast<double>(a.samples.size()) / a.sample_rate) + " s)");
  } else {
    const auto records = data::parse_manifest(std::string(bytes.begin(), bytes.end()), path);
    double total = 0;
    std::size_t with_text = 0;
    for (const auto& r : records) {
      total += r.duration;
      with_text += r.transcript ? 1 : 0;
    }
    emit(io.out, "manifest " + path + ": " + std::to_string(records.size()) + " clips, " +
                     fmt("%.3f", total) + " s, " + std::to_string(with_text) + " with transcripts");
  }
}

}  // namespace lipmel::app
