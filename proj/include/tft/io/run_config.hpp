// Copyright 2026 The TFT Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TFT_IO_RUN_CONFIG_HPP_
#define TFT_IO_RUN_CONFIG_HPP_

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "tft/audio/features.hpp"
#include "tft/common.hpp"
#include "tft/eval/folds.hpp"
#include "tft/model/config.hpp"
#include "tft/train/trainer.hpp"

namespace tft::io {

// Flat sectioned key-value run configuration. File syntax is `[section]`
// headers with `key = value` lines; command-line overrides use
// `--section.key=value`. Unknown sections or keys are rejected, and every
// run echoes its fully-resolved configuration so a run can be reproduced
// from its own output directory.
struct RunConfig {
  audio::FeatureConfig features;

  struct ModelKeys {
    int64_t f = 80, d = 80, c1 = 64;
    int64_t n_classes = 4;
    bool use_time = true, use_freq = true, use_fusion = true;
    int64_t heads_time = 2, heads_freq = 2, heads_fusion = 4;
    int64_t ff_time = 512, ff_freq = 512, ff_fusion = 1024;
    int64_t encoder_depth = 1;
    double dropout = 0.0;
    bool positional_encoding = false;
  } model;

  train::TrainConfig train;

  struct EvalKeys {
    std::string mode = "speaker";
    int jobs = 1;
    std::string only;  // restrict ablate to one architecture
  } eval;

  struct IoKeys {
    std::string manifest;
    std::string features_dir;
    std::string out_dir;
    bool force = false;
  } io;

  ModelConfig model_config() const {
    ModelConfig cfg;
    cfg = cfg.with_dims(model.f, model.d, model.c1);
    cfg.n_classes = model.n_classes;
    cfg.use_time = model.use_time;
    cfg.use_freq = model.use_freq;
    cfg.use_fusion = model.use_fusion;
    cfg.attn_time.n_heads = model.heads_time;
    cfg.attn_freq.n_heads = model.heads_freq;
    cfg.attn_fusion.n_heads = model.heads_fusion;
    cfg.attn_time.ff_dim = model.ff_time;
    cfg.attn_freq.ff_dim = model.ff_freq;
    cfg.attn_fusion.ff_dim = model.ff_fusion;
    cfg.encoder_depth = model.encoder_depth;
    cfg.dropout = model.dropout;
    cfg.positional_encoding = model.positional_encoding;
    cfg.validate();
    return cfg;
  }

  void set(const std::string& section, const std::string& key, const std::string& value);
  std::string get(const std::string& section, const std::string& key) const;

  // Applies one `section.key=value` override.
  void apply_override(const std::string& assignment) {
    const size_t eq = assignment.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("override '" + assignment + "' is not of the form section.key=value");
    }
    const std::string path = assignment.substr(0, eq);
    const std::string value = assignment.substr(eq + 1);
    const size_t dotpos = path.find('.');
    if (dotpos == std::string::npos) {
      throw ConfigError("override key '" + path + "' must be section.key");
    }
    set(path.substr(0, dotpos), path.substr(dotpos + 1), value);
  }

  static RunConfig from_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw InputError("cannot open config file: " + path);
    RunConfig cfg;
    std::string line, section;
    int64_t line_no = 0;
    while (std::getline(is, line)) {
      ++line_no;
      const std::string t = eval::detail::trim(line);
      if (t.empty() || t[0] == '#' || t[0] == ';') continue;
      if (t.front() == '[' && t.back() == ']') {
        section = eval::detail::trim(t.substr(1, t.size() - 2));
        continue;
      }
      const size_t eq = t.find('=');
      if (eq == std::string::npos) {
        throw FormatError("config line " + std::to_string(line_no) + ": expected key = value");
      }
      if (section.empty()) {
        throw FormatError("config line " + std::to_string(line_no) + ": key before any [section]");
      }
      cfg.set(section, eval::detail::trim(t.substr(0, eq)), eval::detail::trim(t.substr(eq + 1)));
    }
    return cfg;
  }

  std::string serialize() const;
  void write_file(const std::string& path) const {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw InputError("cannot write config file: " + path);
    os << serialize();
  }
};

namespace detail {

inline int64_t parse_int(const std::string& v, const std::string& what) {
  try {
    size_t pos = 0;
    const int64_t r = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (const std::exception&) {
    throw ConfigError("invalid integer '" + v + "' for " + what);
  }
}

inline double parse_double(const std::string& v, const std::string& what) {
  try {
    size_t pos = 0;
    const double r = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (const std::exception&) {
    throw ConfigError("invalid number '" + v + "' for " + what);
  }
}

inline bool parse_bool(const std::string& v, const std::string& what) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("invalid boolean '" + v + "' for " + what);
}

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

inline void RunConfig::set(const std::string& section, const std::string& key,
                           const std::string& value) {
  const std::string what = section + "." + key;
  auto i = [&] { return detail::parse_int(value, what); };
  auto f = [&] { return detail::parse_double(value, what); };
  auto b = [&] { return detail::parse_bool(value, what); };

  if (section == "features") {
    if (key == "sample_rate") features.sample_rate_hz = static_cast<int>(i());
    else if (key == "frame_len") features.stft.frame_len_samples = i();
    else if (key == "hop") features.stft.hop_samples = i();
    else if (key == "fft_size") features.stft.fft_size = i();
    else if (key == "preemphasis") features.stft.preemphasis_coeff = f();
    else if (key == "n_mels") features.n_mels = i();
    else if (key == "fmin") features.fmin_hz = f();
    else if (key == "fmax") features.fmax_hz = f();
    else if (key == "log_floor") features.log_floor = f();
    else if (key == "segment_frames") features.segment_frames = i();
    else if (key == "znorm") features.znorm_segments = b();
    else throw ConfigError("unknown config key " + what);
  } else if (section == "model") {
    if (key == "f") model.f = i();
    else if (key == "d") model.d = i();
    else if (key == "c1") model.c1 = i();
    else if (key == "n_classes") model.n_classes = i();
    else if (key == "use_time") model.use_time = b();
    else if (key == "use_freq") model.use_freq = b();
    else if (key == "use_fusion") model.use_fusion = b();
    else if (key == "heads_time") model.heads_time = i();
    else if (key == "heads_freq") model.heads_freq = i();
    else if (key == "heads_fusion") model.heads_fusion = i();
    else if (key == "ff_time") model.ff_time = i();
    else if (key == "ff_freq") model.ff_freq = i();
    else if (key == "ff_fusion") model.ff_fusion = i();
    else if (key == "encoder_depth") model.encoder_depth = i();
    else if (key == "dropout") model.dropout = f();
    else if (key == "positional_encoding") model.positional_encoding = b();
    else throw ConfigError("unknown config key " + what);
  } else if (section == "train") {
    if (key == "batch_size") train.batch_size = i();
    else if (key == "epochs") train.epochs = i();
    else if (key == "lr") train.lr = f();
    else if (key == "seed") train.seed = static_cast<uint64_t>(i());
    else if (key == "eval_every") train.eval_every = i();
    else if (key == "grad_check_mode") train.grad_check_mode = b();
    else if (key == "weight_decay") train.weight_decay = f();
    else if (key == "grad_clip") train.grad_clip = f();
    else if (key == "class_weights") train.class_weights = b();
    else if (key == "early_stop_train_war") train.early_stop_train_war = f();
    else if (key == "lr_decay_every") train.lr_decay_every = i();
    else if (key == "lr_decay_factor") train.lr_decay_factor = f();
    else if (key == "checkpoint_every") train.checkpoint_every = i();
    else throw ConfigError("unknown config key " + what);
  } else if (section == "eval") {
    if (key == "mode") {
      eval::fold_mode_from_string(value);  // validate
      eval.mode = value;
    } else if (key == "jobs") eval.jobs = static_cast<int>(i());
    else if (key == "only") eval.only = value;
    else throw ConfigError("unknown config key " + what);
  } else if (section == "io") {
    if (key == "manifest") io.manifest = value;
    else if (key == "features_dir") io.features_dir = value;
    else if (key == "out_dir") io.out_dir = value;
    else if (key == "force") io.force = b();
    else throw ConfigError("unknown config key " + what);
  } else {
    throw ConfigError("unknown config section [" + section + "]");
  }
}

inline std::string RunConfig::serialize() const {
  std::ostringstream os;
  os << "[features]\n";
  os << "sample_rate = " << features.sample_rate_hz << "\n";
  os << "frame_len = " << features.stft.frame_len_samples << "\n";
  os << "hop = " << features.stft.hop_samples << "\n";
  os << "fft_size = " << features.stft.fft_size << "\n";
  os << "preemphasis = " << detail::fmt_double(features.stft.preemphasis_coeff) << "\n";
  os << "n_mels = " << features.n_mels << "\n";
  os << "fmin = " << detail::fmt_double(features.fmin_hz) << "\n";
  os << "fmax = " << detail::fmt_double(features.fmax_hz) << "\n";
  os << "log_floor = " << detail::fmt_double(features.log_floor) << "\n";
  os << "segment_frames = " << features.segment_frames << "\n";
  os << "znorm = " << (features.znorm_segments ? "true" : "false") << "\n";
  os << "\n[model]\n";
  os << "f = " << model.f << "\n";
  os << "d = " << model.d << "\n";
  os << "c1 = " << model.c1 << "\n";
  os << "n_classes = " << model.n_classes << "\n";
  os << "use_time = " << (model.use_time ? "true" : "false") << "\n";
  os << "use_freq = " << (model.use_freq ? "true" : "false") << "\n";
  os << "use_fusion = " << (model.use_fusion ? "true" : "false") << "\n";
  os << "heads_time = " << model.heads_time << "\n";
  os << "heads_freq = " << model.heads_freq << "\n";
  os << "heads_fusion = " << model.heads_fusion << "\n";
  os << "ff_time = " << model.ff_time << "\n";
  os << "ff_freq = " << model.ff_freq << "\n";
  os << "ff_fusion = " << model.ff_fusion << "\n";
  os << "encoder_depth = " << model.encoder_depth << "\n";
  os << "dropout = " << detail::fmt_double(model.dropout) << "\n";
  os << "positional_encoding = " << (model.positional_encoding ? "true" : "false") << "\n";
  os << "\n[train]\n";
  os << "batch_size = " << train.batch_size << "\n";
  os << "epochs = " << train.epochs << "\n";
  os << "lr = " << detail::fmt_double(train.lr) << "\n";
  os << "seed = " << train.seed << "\n";
  os << "eval_every = " << train.eval_every << "\n";
  os << "grad_check_mode = " << (train.grad_check_mode ? "true" : "false") << "\n";
  os << "weight_decay = " << detail::fmt_double(train.weight_decay) << "\n";
  os << "grad_clip = " << detail::fmt_double(train.grad_clip) << "\n";
  os << "class_weights = " << (train.class_weights ? "true" : "false") << "\n";
  os << "early_stop_train_war = " << detail::fmt_double(train.early_stop_train_war) << "\n";
  os << "lr_decay_every = " << train.lr_decay_every << "\n";
  os << "lr_decay_factor = " << detail::fmt_double(train.lr_decay_factor) << "\n";
  os << "checkpoint_every = " << train.checkpoint_every << "\n";
  os << "\n[eval]\n";
  os << "mode = " << eval.mode << "\n";
  os << "jobs = " << eval.jobs << "\n";
  if (!eval.only.empty()) os << "only = " << eval.only << "\n";
  os << "\n[io]\n";
  if (!io.manifest.empty()) os << "manifest = " << io.manifest << "\n";
  if (!io.features_dir.empty()) os << "features_dir = " << io.features_dir << "\n";
  if (!io.out_dir.empty()) os << "out_dir = " << io.out_dir << "\n";
  os << "force = " << (io.force ? "true" : "false") << "\n";
  return os.str();
}

}  // namespace tft::io

#endif  // TFT_IO_RUN_CONFIG_HPP_
