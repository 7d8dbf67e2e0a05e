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

#ifndef TFT_EVAL_PROTOCOL_HPP_
#define TFT_EVAL_PROTOCOL_HPP_

#include <map>
#include <memory>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "tft/audio/cache.hpp"
#include "tft/audio/segment.hpp"
#include "tft/common.hpp"
#include "tft/eval/folds.hpp"
#include "tft/eval/manifest.hpp"
#include "tft/eval/metrics.hpp"
#include "tft/model/model.hpp"
#include "tft/train/trainer.hpp"

namespace tft::eval {

// Extracted segments per utterance id. An ordered map keeps iteration and
// therefore training order deterministic.
using FeatureStore = std::map<std::string, std::vector<audio::LogMelSegment>>;

// Loads one cache file per manifest utterance from `dir`.
inline FeatureStore load_feature_store(const DatasetManifest& manifest, const std::string& dir) {
  FeatureStore store;
  for (const auto& e : manifest.entries) {
    const std::string path = dir + "/" + e.utterance_id + ".tftf";
    auto segments = audio::read_feature_cache(path);
    if (segments.empty()) throw InputError("cache has no segments: " + path);
    store[e.utterance_id] = std::move(segments);
  }
  return store;
}

struct FoldResult {
  std::string held_out;
  Metrics metrics;
  std::vector<int> y_true, y_pred;  // utterance-level, in manifest order
};

struct ProtocolResult {
  FoldMode mode = FoldMode::kSpeaker;
  std::vector<std::string> labels;
  std::vector<FoldResult> per_fold;
  Metrics pooled;  // over test predictions pooled across folds
};

// Eval-mode prediction for one utterance: per-segment class probabilities
// from a single batched forward pass, averaged, then argmax.
template <typename T>
int predict_utterance(const Model<T>& model, const std::vector<audio::LogMelSegment>& segments,
                      std::vector<std::vector<T>>* segment_probs = nullptr) {
  if (segments.empty()) throw InputError("predict_utterance: no segments");
  std::vector<int64_t> idx(segments.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int64_t>(i);
  auto x = train::assemble_batch<T>(segments, idx);
  auto out = model.forward(nullptr, x, /*train=*/false);
  const int64_t c = out.probs.shape.back();
  std::vector<std::vector<T>> probs(segments.size());
  for (size_t s = 0; s < segments.size(); ++s) {
    const T* row = out.probs.data() + static_cast<int64_t>(s) * c;
    probs[s].assign(row, row + c);
  }
  if (segment_probs) *segment_probs = probs;
  return aggregate_utterance(probs);
}

namespace detail {

template <typename T>
FoldResult run_fold(const DatasetManifest& manifest, const FeatureStore& store,
                    const ModelConfig& mcfg, const train::TrainConfig& tcfg, const Fold& fold,
                    int64_t fold_index) {
  std::vector<audio::LogMelSegment> train_segments;
  for (int64_t mi : fold.train_indices) {
    const auto& e = manifest.entries[static_cast<size_t>(mi)];
    auto it = store.find(e.utterance_id);
    if (it == store.end()) throw InputError("no features for utterance " + e.utterance_id);
    train_segments.insert(train_segments.end(), it->second.begin(), it->second.end());
  }
  if (train_segments.empty()) throw InputError("fold has no training segments");

  train::TrainConfig fold_cfg = tcfg;
  fold_cfg.seed = tcfg.seed + static_cast<uint64_t>(fold_index);
  fold_cfg.checkpoint_dir.clear();

  Model<T> model(mcfg, fold_cfg.seed);
  train::Trainer<T> trainer(model, fold_cfg);
  trainer.run(train_segments);

  FoldResult result;
  result.held_out = fold.held_out;
  for (int64_t mi : fold.test_indices) {
    const auto& e = manifest.entries[static_cast<size_t>(mi)];
    auto it = store.find(e.utterance_id);
    if (it == store.end()) throw InputError("no features for utterance " + e.utterance_id);
    result.y_true.push_back(e.label);
    result.y_pred.push_back(predict_utterance(model, it->second));
  }
  result.metrics = compute_metrics(result.y_true, result.y_pred,
                                   static_cast<int>(manifest.labels.size()));
  return result;
}

}  // namespace detail

// Full cross-validation: trains one model per fold from scratch, predicts
// the held-out utterances, and pools all test predictions before computing
// the overall metrics. Folds may run concurrently (`jobs` threads); per-fold
// seeds are tcfg.seed + fold_index regardless of scheduling.
template <typename T>
ProtocolResult run_protocol(const DatasetManifest& manifest, const FeatureStore& store,
                            const ModelConfig& mcfg, const train::TrainConfig& tcfg,
                            FoldMode mode, int jobs = 1) {
  mcfg.validate();
  if (static_cast<int64_t>(manifest.labels.size()) != mcfg.n_classes) {
    throw ConfigError("model n_classes " + std::to_string(mcfg.n_classes) +
                      " does not match manifest label count " +
                      std::to_string(manifest.labels.size()));
  }
  const FoldPlan plan = build_folds(manifest, mode);

  ProtocolResult result;
  result.mode = mode;
  result.labels = manifest.labels;
  result.per_fold.resize(plan.folds.size());
  std::vector<std::string> errors(plan.folds.size());

  auto worker = [&](size_t fi) {
    try {
      result.per_fold[fi] = detail::run_fold<T>(manifest, store, mcfg, tcfg, plan.folds[fi],
                                                static_cast<int64_t>(fi));
    } catch (const std::exception& e) {
      errors[fi] = e.what();
    }
  };

  if (jobs <= 1) {
    for (size_t fi = 0; fi < plan.folds.size(); ++fi) worker(fi);
  } else {
    for (size_t start = 0; start < plan.folds.size(); start += static_cast<size_t>(jobs)) {
      std::vector<std::thread> threads;
      const size_t end = std::min(plan.folds.size(), start + static_cast<size_t>(jobs));
      for (size_t fi = start; fi < end; ++fi) threads.emplace_back(worker, fi);
      for (auto& t : threads) t.join();
    }
  }
  for (size_t fi = 0; fi < plan.folds.size(); ++fi) {
    if (!errors[fi].empty()) {
      throw Error("fold " + plan.folds[fi].held_out + ": " + errors[fi]);
    }
  }

  std::vector<int> all_true, all_pred;
  for (const auto& fr : result.per_fold) {
    all_true.insert(all_true.end(), fr.y_true.begin(), fr.y_true.end());
    all_pred.insert(all_pred.end(), fr.y_pred.begin(), fr.y_pred.end());
  }
  result.pooled = compute_metrics(all_true, all_pred, static_cast<int>(manifest.labels.size()));
  return result;
}

// The four architecture variants in their canonical report order.
struct AblationConfig {
  std::string name;
  bool use_time, use_freq, use_fusion;
};

inline const std::vector<AblationConfig>& ablation_grid() {
  static const std::vector<AblationConfig> grid = {
      {"T+F", true, true, false},
      {"T+TF", true, false, true},
      {"F+TF", false, true, true},
      {"T+F+TF", true, true, true},
  };
  return grid;
}

struct AblationRow {
  AblationConfig arch;
  ProtocolResult protocol;
  int64_t trainable_params = 0;
};

// Runs the evaluation protocol once per architecture variant. `only`
// restricts the run to a single named variant.
template <typename T>
std::vector<AblationRow> run_ablations(const DatasetManifest& manifest, const FeatureStore& store,
                                       const ModelConfig& base, const train::TrainConfig& tcfg,
                                       FoldMode mode, int jobs = 1, const std::string& only = "") {
  std::vector<AblationRow> rows;
  bool matched = false;
  for (const auto& arch : ablation_grid()) {
    if (!only.empty() && arch.name != only) continue;
    matched = true;
    ModelConfig cfg = base;
    cfg.use_time = arch.use_time;
    cfg.use_freq = arch.use_freq;
    cfg.use_fusion = arch.use_fusion;
    cfg.validate();
    AblationRow row;
    row.arch = arch;
    row.trainable_params = Model<T>(cfg, tcfg.seed).parameter_count();
    row.protocol = run_protocol<T>(manifest, store, cfg, tcfg, mode, jobs);
    rows.push_back(std::move(row));
  }
  if (!only.empty() && !matched) {
    throw ConfigError("unknown architecture '" + only + "' (expected T+F, T+TF, F+TF or T+F+TF)");
  }
  return rows;
}

}  // namespace tft::eval

#endif  // TFT_EVAL_PROTOCOL_HPP_
