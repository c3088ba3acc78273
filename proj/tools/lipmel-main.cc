// tools/lipmel-main.cc

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

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lipmel/lipmel.h"

namespace {

void print_line(void*, lm_stream stream, const char* line) {
  std::FILE* f = stream == LM_STREAM_WARN ? stderr : stdout;
  std::fputs(line, f);
  std::fputc('\n', f);
  std::fflush(f);
}

// Flag value bound to a config key; applied only when given.
struct KeyFlag {
  std::string key;
  std::string value;
  CLI::Option* option = nullptr;
};

struct SwitchFlag {
  std::string key;
  bool value = false;
  CLI::Option* option = nullptr;
};

class Command {
 public:
  Command(CLI::App& app, const std::string& name, const std::string& help)
      : name_(name), sub_(app.add_subcommand(name, help)) {}

  CLI::App* app() { return sub_; }
  const std::string& name() const { return name_; }

  void value(const std::string& flag, const std::string& key, const std::string& help,
             bool required = false) {
    flags_.push_back(std::make_unique<KeyFlag>());
    KeyFlag& f = *flags_.back();
    f.key = key;
    f.option = sub_->add_option(flag, f.value, help + " [" + key + "]");
    if (required) required_.push_back(&f);
  }

  void positional(const std::string& name, const std::string& key, const std::string& help) {
    flags_.push_back(std::make_unique<KeyFlag>());
    KeyFlag& f = *flags_.back();
    f.key = key;
    f.option = sub_->add_option(name, f.value, help + " [" + key + "]");
  }

  void toggle(const std::string& flag, const std::string& key, const std::string& help) {
    switches_.push_back(std::make_unique<SwitchFlag>());
    SwitchFlag& f = *switches_.back();
    f.key = key;
    f.option = sub_->add_flag(flag, f.value, help + " [" + key + " = true]");
  }

  // Config files named by this command's own file options.
  void config_file(const std::string& flag, const std::string& help) {
    sub_->add_option(flag, files_, help)->check(CLI::ExistingFile);
  }

  lm_status apply(lm_config* cfg) const {
    for (const auto& f : files_)
      if (lm_status s = lm_config_load_file(cfg, f.c_str()); s != LM_OK) return s;
    for (const auto& f : flags_)
      if (f->option->count() > 0)
        if (lm_status s = lm_config_set(cfg, f->key.c_str(), f->value.c_str()); s != LM_OK) return s;
    for (const auto& f : switches_)
      if (f->option->count() > 0)
        if (lm_status s = lm_config_set(cfg, f->key.c_str(), f->value ? "true" : "false"); s != LM_OK)
          return s;
    return LM_OK;
  }

 private:
  std::string name_;
  CLI::App* sub_;
  std::vector<std::unique_ptr<KeyFlag>> flags_;
  std::vector<std::unique_ptr<SwitchFlag>> switches_;
  std::vector<KeyFlag*> required_;
  std::vector<std::string> files_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lipmel: lip-to-speech synthesis engine"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(lm_version()));
  std::vector<std::string> config_files, overrides;
  std::string seed;
  app.add_option("--config", config_files, "Key-value config file (repeatable; later files win)")
      ->check(CLI::ExistingFile);
  app.add_option("--set", overrides, "Override one setting, KEY=VALUE (repeatable; wins over flags)");
  app.add_option("--seed", seed, "Seed for corpus generation, training and synthesis "
                                 "[synth.seed, train.seed, synthesize.seed]");

  std::vector<std::unique_ptr<Command>> commands;
  auto add = [&](const std::string& name, const std::string& help) {
    commands.push_back(std::make_unique<Command>(app, name, help));
    return commands.back().get();
  };

  Command* gendata = add("gendata", "Generate a synthetic audio-visual corpus");
  gendata->config_file("--spec", "Corpus spec file (synth.* keys)");
  gendata->value("--out", "gendata.out", "Output directory");
  gendata->value("--clips", "synth.n_clips", "Number of clips");

  Command* train = add("train", "Train a model on a manifest");
  train->value("--data", "train.data", "Training manifest (JSONL)");
  train->value("--out", "train.out", "Output directory for checkpoints and log");
  train->value("--resume", "train.resume", "Resume from a checkpoint");
  train->value("--init", "train.init", "Initialise weights from a checkpoint, fresh schedule");
  train->toggle("--fine-tune", "train.fine_tune", "Scale every learning rate by 0.1");
  train->toggle("--allow-config-change", "train.allow_config_change",
                "Resume even if the training configuration changed");
  train->value("--preset", "model.preset", "Model preset: standard, reduced or micro");
  train->value("--steps", "train.total_steps", "Total optimizer steps");

  Command* synth = add("synthesize", "Generate speech from a video");
  synth->value("--checkpoint", "synthesize.checkpoint", "Trained checkpoint");
  synth->value("--video", "synthesize.video", "Input video container");
  synth->value("--out-wav", "synthesize.out_wav", "Output WAV path");
  synth->value("--out-mel", "synthesize.out_mel", "Optional predicted mel matrix");
  synth->value("--out-alignment", "synthesize.out_alignment", "Optional alignment matrix");
  synth->value("--gl-iters", "synthesize.griffin_lim_iters", "Griffin-Lim iterations");
  synth->toggle("--strict", "synthesize.strict", "Fail (exit 5) if decoding hits max steps");

  Command* eval = add("evaluate", "Score hypothesis audio against a manifest");
  eval->value("--manifest", "evaluate.manifest", "Reference manifest");
  eval->value("--hyp-dir", "evaluate.hyp_dir", "Directory of <clip_id>.wav (and .txt) hypotheses");
  eval->value("--report", "evaluate.report", "Output report (JSONL)");
  eval->toggle("--strict", "evaluate.strict", "Fail (exit 3) on missing hypotheses");

  Command* grad = add("gradcheck", "Verify gradients of every primitive and the full model");
  grad->config_file("--micro-config", "Model overrides for the micro instance (model.* keys)");
  grad->value("--fault", "gradcheck.fault", "Corrupt the named backward rule (self-test)");
  grad->value("--tolerance", "gradcheck.tolerance", "Maximum relative error");

  Command* inspect = add("inspect", "Describe a checkpoint, video, WAV or manifest");
  inspect->positional("path", "inspect.path", "File to describe");

  CLI11_PARSE(app, argc, argv);

  lm_config* cfg = nullptr;
  if (lm_config_create(&cfg) != LM_OK) {
    std::fprintf(stderr, "error: %s\n", lm_last_error());
    return LM_ERR_INTERNAL;
  }
  auto finish = [&](lm_status s) {
    if (s != LM_OK) std::fprintf(stderr, "error: %s\n", lm_last_error());
    lm_config_destroy(cfg);
    return static_cast<int>(s);
  };
  for (const auto& f : config_files)
    if (lm_status s = lm_config_load_file(cfg, f.c_str()); s != LM_OK) return finish(s);
  if (!seed.empty())
    for (const char* key : {"synth.seed", "train.seed", "synthesize.seed"})
      if (lm_status s = lm_config_set(cfg, key, seed.c_str()); s != LM_OK) return finish(s);
  const Command* chosen = nullptr;
  for (const auto& c : commands)
    if (c->app()->parsed()) chosen = c.get();
  if (lm_status s = chosen->apply(cfg); s != LM_OK) return finish(s);
  for (const auto& o : overrides)
    if (lm_status s = lm_config_apply(cfg, o.c_str()); s != LM_OK) return finish(s);
  return finish(lm_run(chosen->name().c_str(), cfg, print_line, nullptr));
}
