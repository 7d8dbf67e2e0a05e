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

#ifndef TFT_EVAL_FOLDS_HPP_
#define TFT_EVAL_FOLDS_HPP_

#include <map>
#include <string>
#include <vector>

#include "tft/common.hpp"
#include "tft/eval/manifest.hpp"

namespace tft::eval {

enum class FoldMode { kSpeaker, kSession };

inline const char* fold_mode_name(FoldMode m) {
  return m == FoldMode::kSpeaker ? "speaker" : "session";
}

inline FoldMode fold_mode_from_string(const std::string& s) {
  if (s == "speaker") return FoldMode::kSpeaker;
  if (s == "session") return FoldMode::kSession;
  throw ConfigError("unknown fold mode '" + s + "' (expected speaker or session)");
}

struct Fold {
  std::string held_out;                 // test speaker or session id
  std::vector<int64_t> train_indices;   // into manifest.entries
  std::vector<int64_t> test_indices;
};

struct FoldPlan {
  FoldMode mode = FoldMode::kSpeaker;
  std::vector<Fold> folds;
};

// Leave-one-unit-out plan: each speaker (or session) is the test unit of
// exactly one fold, folds ordered by unit id. Every fold partitions the
// manifest: train and test are disjoint and jointly cover all entries.
inline FoldPlan build_folds(const DatasetManifest& manifest, FoldMode mode) {
  manifest.validate();
  std::map<std::string, std::vector<int64_t>> groups;
  for (size_t i = 0; i < manifest.entries.size(); ++i) {
    const auto& e = manifest.entries[i];
    const std::string& key = mode == FoldMode::kSpeaker ? e.speaker_id : e.session_id;
    groups[key].push_back(static_cast<int64_t>(i));
  }
  if (groups.size() < 2) {
    throw ConfigError(std::string("need at least 2 distinct ") + fold_mode_name(mode) +
                      " ids for cross-validation, got " + std::to_string(groups.size()));
  }
  FoldPlan plan;
  plan.mode = mode;
  for (const auto& [unit, test_idx] : groups) {
    Fold fold;
    fold.held_out = unit;
    fold.test_indices = test_idx;
    for (size_t i = 0; i < manifest.entries.size(); ++i) {
      const auto& e = manifest.entries[i];
      const std::string& key = mode == FoldMode::kSpeaker ? e.speaker_id : e.session_id;
      if (key != unit) fold.train_indices.push_back(static_cast<int64_t>(i));
    }
    plan.folds.push_back(std::move(fold));
  }
  return plan;
}

}  // namespace tft::eval

#endif  // TFT_EVAL_FOLDS_HPP_
