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

#ifndef TFT_EVAL_METRICS_HPP_
#define TFT_EVAL_METRICS_HPP_

#include <cstdint>
#include <vector>

#include "tft/common.hpp"

namespace tft::eval {

// Confusion counts plus the two recall summaries: WAR is overall accuracy
// (sample-weighted recall), UAR averages per-class recall over the classes
// that actually appear among the true labels.
struct Metrics {
  std::vector<std::vector<int64_t>> confusion;  // [true][predicted]
  double war = 0.0;
  double uar = 0.0;

  int64_t total() const {
    int64_t n = 0;
    for (const auto& row : confusion)
      for (int64_t v : row) n += v;
    return n;
  }
};

inline Metrics compute_metrics(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                               int n_classes) {
  if (y_true.size() != y_pred.size()) throw InputError("compute_metrics: length mismatch");
  if (y_true.empty()) throw InputError("compute_metrics: no samples");
  if (n_classes < 1) throw InputError("compute_metrics: n_classes must be >= 1");
  Metrics m;
  m.confusion.assign(static_cast<size_t>(n_classes),
                     std::vector<int64_t>(static_cast<size_t>(n_classes), 0));
  for (size_t i = 0; i < y_true.size(); ++i) {
    const int t = y_true[i], p = y_pred[i];
    if (t < 0 || t >= n_classes || p < 0 || p >= n_classes) {
      throw InputError("compute_metrics: label out of range");
    }
    ++m.confusion[static_cast<size_t>(t)][static_cast<size_t>(p)];
  }
  int64_t diag = 0;
  double recall_sum = 0.0;
  int present = 0;
  for (int c = 0; c < n_classes; ++c) {
    int64_t row_total = 0;
    for (int64_t v : m.confusion[static_cast<size_t>(c)]) row_total += v;
    diag += m.confusion[static_cast<size_t>(c)][static_cast<size_t>(c)];
    if (row_total > 0) {
      recall_sum += static_cast<double>(m.confusion[static_cast<size_t>(c)][static_cast<size_t>(c)]) /
                    static_cast<double>(row_total);
      ++present;
    }
  }
  m.war = static_cast<double>(diag) / static_cast<double>(y_true.size());
  m.uar = present > 0 ? recall_sum / static_cast<double>(present) : 0.0;
  return m;
}

// Utterance-level decision from its segment probabilities: arithmetic mean
// of the probability vectors, argmax, ties to the lowest class index.
template <typename T>
int aggregate_utterance(const std::vector<std::vector<T>>& segment_probs) {
  if (segment_probs.empty()) throw InputError("aggregate_utterance: no segments");
  const size_t c = segment_probs.front().size();
  if (c == 0) throw InputError("aggregate_utterance: empty probability vector");
  std::vector<double> mean(c, 0.0);
  for (const auto& p : segment_probs) {
    if (p.size() != c) throw InputError("aggregate_utterance: inconsistent class counts");
    for (size_t j = 0; j < c; ++j) mean[j] += static_cast<double>(p[j]);
  }
  int arg = 0;
  for (size_t j = 1; j < c; ++j) {
    if (mean[j] > mean[static_cast<size_t>(arg)]) arg = static_cast<int>(j);
  }
  return arg;
}

}  // namespace tft::eval

#endif  // TFT_EVAL_METRICS_HPP_
