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

// Command-line front end: feature extraction, training, cross-validated
// evaluation, architecture ablations, and attention-matrix export.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tft/tft.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonArgs {
  std::string config_path;
  std::optional<uint64_t> seed;
  std::string out_dir;
};

void add_common(CLI::App* cmd, CommonArgs* args) {
  cmd->add_option("--config", args->config_path, "run configuration file");
  cmd->add_option("--seed", args->seed, "override train.seed");
  cmd->add_option("--out", args->out_dir, "output directory");
  cmd->allow_extras();
}

// Builds the resolved configuration: file (explicit or $TFT_CONFIG), then
// --section.key=value overrides, then the dedicated flags.
tft::io::RunConfig resolve_config(const CommonArgs& args, const std::vector<std::string>& extras) {
  tft::io::RunConfig cfg;
  std::string path = args.config_path;
  if (path.empty()) {
    if (const char* env = std::getenv("TFT_CONFIG")) path = env;
  }
  if (!path.empty()) cfg = tft::io::RunConfig::from_file(path);
  for (const auto& raw : extras) {
    if (raw.rfind("--", 0) != 0 || raw.find('=') == std::string::npos) {
      throw tft::ConfigError("unrecognized argument '" + raw +
                             "' (overrides look like --section.key=value)");
    }
    cfg.apply_override(raw.substr(2));
  }
  if (args.seed) cfg.train.seed = *args.seed;
  if (!args.out_dir.empty()) cfg.io.out_dir = args.out_dir;
  return cfg;
}

std::string require_out_dir(tft::io::RunConfig& cfg) {
  if (cfg.io.out_dir.empty()) throw tft::ConfigError("no output directory (--out or io.out_dir)");
  fs::create_directories(cfg.io.out_dir);
  return cfg.io.out_dir;
}

void echo_config(const tft::io::RunConfig& cfg, const std::string& out_dir) {
  cfg.write_file(out_dir + "/resolved.cfg");
}

std::vector<std::string> collect_extras(CLI::App& app, CLI::App* sub) {
  std::vector<std::string> extras = app.remaining();
  for (const auto& e : sub->remaining()) extras.push_back(e);
  return extras;
}

void write_labels(const std::vector<std::string>& labels, const std::string& path) {
  std::ofstream os(path, std::ios::trunc);
  for (const auto& l : labels) os << l << "\n";
}

std::vector<std::string> read_labels(const std::string& path) {
  std::ifstream is(path);
  if (!is) return {};
  std::vector<std::string> labels;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty()) labels.push_back(line);
  }
  return labels;
}

tft::eval::DatasetManifest load_manifest(const tft::io::RunConfig& cfg) {
  if (cfg.io.manifest.empty()) {
    throw tft::ConfigError("no manifest (--manifest or io.manifest)");
  }
  std::vector<std::string> labels;
  if (!cfg.io.features_dir.empty()) {
    labels = read_labels(cfg.io.features_dir + "/labels.txt");
  }
  return tft::eval::DatasetManifest::load(cfg.io.manifest, std::move(labels));
}

// ---------------------------------------------------------------------- //

int cmd_extract(tft::io::RunConfig cfg) {
  const std::string out_dir = require_out_dir(cfg);
  echo_config(cfg, out_dir);
  auto manifest = tft::eval::DatasetManifest::load(cfg.io.manifest);
  write_labels(manifest.labels, out_dir + "/labels.txt");

  std::map<std::string, int64_t> class_segments;
  for (const auto& l : manifest.labels) class_segments[l] = 0;
  int64_t done = 0, skipped = 0;
  std::vector<std::string> failures, warnings;

  for (const auto& entry : manifest.entries) {
    const std::string cache_path = out_dir + "/" + entry.utterance_id + ".tftf";
    try {
      std::vector<tft::audio::LogMelSegment> segments;
      if (!cfg.io.force && fs::exists(cache_path)) {
        segments = tft::audio::read_feature_cache(cache_path);
        ++skipped;
      } else {
        std::string warning;
        const auto wave = tft::audio::read_wav(entry.path, &warning);
        if (!warning.empty()) warnings.push_back(warning);
        segments = tft::audio::extract_segments(wave, cfg.features, entry.utterance_id,
                                                static_cast<uint16_t>(entry.label));
        tft::audio::write_feature_cache(segments, cache_path);
        ++done;
      }
      class_segments[entry.label_name] += static_cast<int64_t>(segments.size());
    } catch (const std::exception& e) {
      failures.push_back(entry.utterance_id + ": " + e.what());
    }
  }

  std::ofstream summary(out_dir + "/summary.txt", std::ios::trunc);
  auto emit = [&](std::ostream& os) {
    os << "utterances: " << manifest.entries.size() << " (extracted " << done << ", cached "
       << skipped << ", failed " << failures.size() << ")\n";
    os << "segments per class:\n";
    for (const auto& [name, count] : class_segments) os << "  " << name << ": " << count << "\n";
    for (const auto& w : warnings) os << "warning: " << w << "\n";
    for (const auto& f : failures) os << "error: " << f << "\n";
  };
  emit(summary);
  emit(std::cout);
  return failures.empty() ? 0 : 1;
}

std::vector<tft::audio::LogMelSegment> load_all_segments(const std::string& features_dir) {
  std::vector<std::string> files;
  for (const auto& e : fs::directory_iterator(features_dir)) {
    if (e.path().extension() == ".tftf") files.push_back(e.path().string());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw tft::InputError("no .tftf caches in " + features_dir);
  std::vector<tft::audio::LogMelSegment> all;
  for (const auto& f : files) {
    auto segs = tft::audio::read_feature_cache(f);
    all.insert(all.end(), segs.begin(), segs.end());
  }
  return all;
}

template <typename T>
int run_training(tft::io::RunConfig& cfg, const std::string& out_dir,
                 const std::string& resume_path) {
  const auto data = load_all_segments(cfg.io.features_dir);
  const tft::ModelConfig mcfg = cfg.model_config();
  for (const auto& s : data) {
    if (s.label >= mcfg.n_classes) {
      throw tft::InputError("cached label " + std::to_string(s.label) +
                            " out of range for model.n_classes");
    }
  }
  tft::Model<T> model(mcfg, cfg.train.seed);
  tft::train::TrainConfig tc = cfg.train;
  tc.checkpoint_dir = out_dir;
  tft::train::Trainer<T> trainer(model, tc);
  int64_t start_epoch = 0;
  if (!resume_path.empty()) {
    const auto ck = tft::read_checkpoint(resume_path);
    tft::apply_checkpoint(ck, model, &trainer.optimizer());
    start_epoch = ck.epoch;
  }
  const auto stats = trainer.run(data, out_dir + "/train_log.csv", start_epoch);
  if (!stats.empty()) {
    std::cout << "trained " << stats.size() << " epochs on " << data.size()
              << " segments; final loss " << stats.back().mean_loss << ", train WAR "
              << tft::eval::format_percent(stats.back().train_war) << "%\n";
  }
  std::cout << "checkpoint: " << out_dir << "/final.tftc\n";
  return 0;
}

int cmd_train(tft::io::RunConfig cfg, const std::string& resume_path) {
  const std::string out_dir = require_out_dir(cfg);
  echo_config(cfg, out_dir);
  if (cfg.io.features_dir.empty()) {
    throw tft::ConfigError("no feature directory (--features or io.features_dir)");
  }
  // grad-check mode runs the identical loop in double precision
  return cfg.train.grad_check_mode ? run_training<double>(cfg, out_dir, resume_path)
                                   : run_training<float>(cfg, out_dir, resume_path);
}

int cmd_eval(tft::io::RunConfig cfg) {
  const std::string out_dir = require_out_dir(cfg);
  echo_config(cfg, out_dir);
  if (cfg.io.features_dir.empty()) {
    throw tft::ConfigError("no feature directory (--features or io.features_dir)");
  }
  auto manifest = load_manifest(cfg);
  tft::ModelConfig mcfg = cfg.model_config();
  if (mcfg.n_classes != static_cast<int64_t>(manifest.labels.size())) {
    throw tft::ConfigError("model.n_classes=" + std::to_string(mcfg.n_classes) +
                           " but manifest has " + std::to_string(manifest.labels.size()) +
                           " labels");
  }
  const auto store = tft::eval::load_feature_store(manifest, cfg.io.features_dir);
  const auto mode = tft::eval::fold_mode_from_string(cfg.eval.mode);
  const auto result =
      tft::eval::run_protocol<float>(manifest, store, mcfg, cfg.train, mode, cfg.eval.jobs);

  std::ofstream txt(out_dir + "/report.txt", std::ios::trunc);
  tft::eval::write_protocol_report(txt, result);
  std::ofstream csv(out_dir + "/report.csv", std::ios::trunc);
  tft::eval::write_protocol_csv(csv, result);
  tft::eval::write_protocol_report(std::cout, result);
  return 0;
}

int cmd_ablate(tft::io::RunConfig cfg) {
  const std::string out_dir = require_out_dir(cfg);
  echo_config(cfg, out_dir);
  if (cfg.io.features_dir.empty()) {
    throw tft::ConfigError("no feature directory (--features or io.features_dir)");
  }
  auto manifest = load_manifest(cfg);
  tft::ModelConfig base = cfg.model_config();
  if (base.n_classes != static_cast<int64_t>(manifest.labels.size())) {
    throw tft::ConfigError("model.n_classes does not match manifest label count");
  }
  const auto store = tft::eval::load_feature_store(manifest, cfg.io.features_dir);
  const auto mode = tft::eval::fold_mode_from_string(cfg.eval.mode);
  const auto rows = tft::eval::run_ablations<float>(manifest, store, base, cfg.train, mode,
                                                    cfg.eval.jobs, cfg.eval.only);

  std::ofstream txt(out_dir + "/ablation.txt", std::ios::trunc);
  tft::eval::write_ablation_report(txt, rows);
  std::ofstream csv(out_dir + "/ablation.csv", std::ios::trunc);
  tft::eval::write_ablation_csv(csv, rows);
  tft::eval::write_ablation_report(std::cout, rows);
  return 0;
}

void write_matrix_csv(const std::string& path, const float* data, int64_t rows, int64_t cols) {
  std::ofstream os(path, std::ios::trunc);
  os.precision(9);
  for (int64_t r = 0; r < rows; ++r) {
    for (int64_t c = 0; c < cols; ++c) os << (c ? "," : "") << data[r * cols + c];
    os << "\n";
  }
}

void write_matrix_meta(const std::string& path, const std::string& sample_id,
                       const std::string& encoder, const std::string& head,
                       const std::string& rows_axis, const std::string& cols_axis) {
  std::ofstream os(path, std::ios::trunc);
  os << "sample_id = " << sample_id << "\n";
  os << "encoder = " << encoder << "\n";
  os << "head = " << head << "\n";
  os << "rows = " << rows_axis << "\n";
  os << "cols = " << cols_axis << "\n";
}

// Writes head-averaged (and optionally per-head) attention matrices.
void dump_attention_maps(const tft::Tensor<float>& attn, const std::string& out_dir,
                         const std::string& stem, const std::string& sample_id,
                         const std::string& encoder, const std::string& axis, bool per_head) {
  const int64_t heads = attn.dim(1), lq = attn.dim(2), lk = attn.dim(3);
  std::vector<float> mean(static_cast<size_t>(lq * lk), 0.0f);
  for (int64_t h = 0; h < heads; ++h) {
    const float* src = attn.data() + h * lq * lk;
    for (int64_t i = 0; i < lq * lk; ++i) mean[i] += src[i];
    if (per_head) {
      const std::string head_stem = stem + "_head" + std::to_string(h);
      write_matrix_csv(out_dir + "/" + head_stem + ".csv", src, lq, lk);
      write_matrix_meta(out_dir + "/" + head_stem + ".meta", sample_id, encoder,
                        std::to_string(h), axis, axis);
    }
  }
  for (auto& v : mean) v /= static_cast<float>(heads);
  write_matrix_csv(out_dir + "/" + stem + ".csv", mean.data(), lq, lk);
  write_matrix_meta(out_dir + "/" + stem + ".meta", sample_id, encoder, "mean", axis, axis);
}

int cmd_dump_attention(tft::io::RunConfig cfg, const std::string& checkpoint_path,
                       const std::string& sample_id, bool per_head) {
  const std::string out_dir = require_out_dir(cfg);
  echo_config(cfg, out_dir);
  if (cfg.io.features_dir.empty()) {
    throw tft::ConfigError("no feature directory (--features or io.features_dir)");
  }

  std::string utterance = sample_id;
  uint32_t segment_index = 0;
  if (const size_t colon = sample_id.find(':'); colon != std::string::npos) {
    utterance = sample_id.substr(0, colon);
    segment_index = static_cast<uint32_t>(std::stoul(sample_id.substr(colon + 1)));
  }
  const std::string cache_path = cfg.io.features_dir + "/" + utterance + ".tftf";
  if (!fs::exists(cache_path)) throw tft::InputError("unknown sample: no cache " + cache_path);
  const auto segments = tft::audio::read_feature_cache(cache_path);
  const auto it = std::find_if(segments.begin(), segments.end(), [&](const auto& s) {
    return s.segment_index == segment_index;
  });
  if (it == segments.end()) {
    throw tft::InputError("utterance " + utterance + " has no segment " +
                          std::to_string(segment_index));
  }

  tft::ModelConfig mcfg = cfg.model_config();
  tft::Model<float> model(mcfg, cfg.train.seed);
  tft::apply_checkpoint(tft::read_checkpoint(checkpoint_path), model,
                        static_cast<tft::nn::Adam<float>*>(nullptr));

  auto x = tft::train::assemble_batch<float>(segments, {static_cast<int64_t>(
                                                 std::distance(segments.begin(), it))});
  const auto out = model.forward(nullptr, x, /*train=*/false);

  write_matrix_csv(out_dir + "/input_logmel.csv", it->values.data(), it->n_mels, it->n_frames);
  write_matrix_meta(out_dir + "/input_logmel.meta", sample_id, "input", "-", "mel_bands",
                    "frames");
  if (out.trace.time_attn) {
    dump_attention_maps(*out.trace.time_attn, out_dir, "time_attention", sample_id,
                        "time_transformer", "frames", per_head);
  }
  if (out.trace.freq_attn) {
    dump_attention_maps(*out.trace.freq_attn, out_dir, "freq_attention", sample_id,
                        "frequency_transformer", "mel_bands", per_head);
  }
  if (out.trace.fusion_attn) {
    dump_attention_maps(*out.trace.fusion_attn, out_dir, "fusion_attention", sample_id,
                        "fusion_transformer", "band_tokens", per_head);
  }
  std::cout << "wrote attention matrices for " << sample_id << " to " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"time-frequency transformer for speech emotion recognition"};
  app.require_subcommand(1);
  app.allow_extras();

  CommonArgs extract_args, train_args, eval_args, ablate_args, dump_args;
  std::string manifest_opt, features_opt, mode_opt, only_opt, resume_opt;
  std::string checkpoint_opt, sample_opt;
  bool force_opt = false, per_head_opt = false;
  int jobs_opt = 0;

  auto* extract = app.add_subcommand("extract", "extract log-Mel feature caches from a manifest");
  add_common(extract, &extract_args);
  extract->add_option("--manifest", manifest_opt, "utterance manifest (path,speaker,session,label)");
  extract->add_flag("--force", force_opt, "re-extract even if a cache exists");

  auto* train_cmd = app.add_subcommand("train", "train one model on every cached segment");
  add_common(train_cmd, &train_args);
  train_cmd->add_option("--features", features_opt, "directory of .tftf caches");
  train_cmd->add_option("--resume", resume_opt, "checkpoint to resume from");

  auto* eval_cmd = app.add_subcommand("eval", "leave-one-speaker/session-out evaluation");
  add_common(eval_cmd, &eval_args);
  eval_cmd->add_option("--manifest", manifest_opt, "utterance manifest");
  eval_cmd->add_option("--features", features_opt, "directory of .tftf caches");
  eval_cmd->add_option("--mode", mode_opt, "fold unit: speaker or session");
  eval_cmd->add_option("--jobs", jobs_opt, "concurrent folds");

  auto* ablate = app.add_subcommand("ablate", "run the four architecture variants");
  add_common(ablate, &ablate_args);
  ablate->add_option("--manifest", manifest_opt, "utterance manifest");
  ablate->add_option("--features", features_opt, "directory of .tftf caches");
  ablate->add_option("--mode", mode_opt, "fold unit: speaker or session");
  ablate->add_option("--jobs", jobs_opt, "concurrent folds");
  ablate->add_option("--only", only_opt, "run a single architecture (e.g. T+TF)");

  auto* dump = app.add_subcommand("dump-attention", "export attention matrices for one sample");
  add_common(dump, &dump_args);
  dump->add_option("--checkpoint", checkpoint_opt, "trained checkpoint")->required();
  dump->add_option("--sample", sample_opt, "utterance id, optionally id:segment")->required();
  dump->add_option("--features", features_opt, "directory of .tftf caches");
  dump->add_flag("--per-head", per_head_opt, "also write per-head matrices");

  CLI11_PARSE(app, argc, argv);

  try {
    auto finish = [&](CLI::App* sub, CommonArgs& args) {
      auto cfg = resolve_config(args, collect_extras(app, sub));
      if (!manifest_opt.empty()) cfg.io.manifest = manifest_opt;
      if (!features_opt.empty()) cfg.io.features_dir = features_opt;
      if (!mode_opt.empty()) {
        tft::eval::fold_mode_from_string(mode_opt);
        cfg.eval.mode = mode_opt;
      }
      if (!only_opt.empty()) cfg.eval.only = only_opt;
      if (jobs_opt > 0) cfg.eval.jobs = jobs_opt;
      if (force_opt) cfg.io.force = true;
      return cfg;
    };

    if (extract->parsed()) return cmd_extract(finish(extract, extract_args));
    if (train_cmd->parsed()) return cmd_train(finish(train_cmd, train_args), resume_opt);
    if (eval_cmd->parsed()) return cmd_eval(finish(eval_cmd, eval_args));
    if (ablate->parsed()) return cmd_ablate(finish(ablate, ablate_args));
    if (dump->parsed()) {
      return cmd_dump_attention(finish(dump, dump_args), checkpoint_opt, sample_opt, per_head_opt);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
