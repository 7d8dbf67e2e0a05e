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

#ifndef TFT_NN_LOSS_HPP_
#define TFT_NN_LOSS_HPP_

#include <cmath>
#include <memory>
#include <utility>
#include <vector>

#include "tft/autodiff.hpp"
#include "tft/nn/ops.hpp"
#include "tft/tensor.hpp"

namespace tft::nn {

inline constexpr double kLossFloor = 1e-10;

// Checks that every row of z has exactly one 1 and 0 elsewhere; returns the
// argmax index per row.
template <typename T>
std::vector<int> onehot_to_labels(const Tensor<T>& z) {
  if (z.ndim() != 2) throw InputError("one-hot tensor must be (b, c)");
  const int64_t b = z.dim(0), c = z.dim(1);
  std::vector<int> labels(static_cast<size_t>(b), -1);
  for (int64_t i = 0; i < b; ++i) {
    for (int64_t j = 0; j < c; ++j) {
      const T v = z.values[i * c + j];
      if (v == T(1)) {
        if (labels[i] != -1) throw InputError("one-hot row has multiple ones");
        labels[i] = static_cast<int>(j);
      } else if (v != T(0)) {
        throw InputError("one-hot entries must be 0 or 1");
      }
    }
    if (labels[i] == -1) throw InputError("one-hot row has no 1");
  }
  return labels;
}

// Mean negative log-likelihood of the true classes, on probabilities that
// already sum to 1 per row. Log is floored to avoid -inf.
template <typename T>
double cross_entropy_value(const Tensor<T>& probs, const std::vector<int>& labels,
                           double floor = kLossFloor) {
  if (probs.ndim() != 2) throw InputError("cross_entropy: probs must be (b, c)");
  const int64_t b = probs.dim(0), c = probs.dim(1);
  if (static_cast<int64_t>(labels.size()) != b) throw InputError("cross_entropy: label count mismatch");
  double total = 0;
  for (int64_t i = 0; i < b; ++i) {
    const int li = labels[static_cast<size_t>(i)];
    if (li < 0 || li >= c) throw InputError("cross_entropy: label out of range");
    const double p = static_cast<double>(probs.values[i * c + li]);
    total += -std::log(std::max(p, floor));
  }
  return total / static_cast<double>(b);
}

template <typename T>
double cross_entropy_value(const Tensor<T>& probs, const Tensor<T>& onehot,
                           double floor = kLossFloor) {
  return cross_entropy_value(probs, onehot_to_labels(onehot), floor);
}

template <typename T>
struct LossResult {
  TensorPtr<T> loss;    // scalar node, shape (1)
  TensorPtr<T> probs;   // softmax of the logits, (b, c), detached
};

// Fused softmax + cross-entropy on logits. The backward pass adds
// w_i * (p_i - z_i) / sum(w) to the logit gradients, which stays stable even
// for saturated probabilities. `class_weights`, when non-empty, weights each
// sample by its true-class weight and normalizes by the weight total.
template <typename T>
LossResult<T> softmax_cross_entropy(Tape<T>* tape, const TensorPtr<T>& logits,
                                    const std::vector<int>& labels,
                                    const std::vector<T>& class_weights = {},
                                    double floor = kLossFloor) {
  if (logits->ndim() != 2) throw InputError("softmax_cross_entropy: logits must be (b, c)");
  const int64_t b = logits->dim(0), c = logits->dim(1);
  if (static_cast<int64_t>(labels.size()) != b) {
    throw InputError("softmax_cross_entropy: label count mismatch");
  }
  if (!class_weights.empty() && static_cast<int64_t>(class_weights.size()) != c) {
    throw InputError("softmax_cross_entropy: class weight count mismatch");
  }

  auto probs = make_tensor<T>({b, c});
  auto weights = std::make_shared<std::vector<T>>(static_cast<size_t>(b), T(1));
  double weight_sum = 0;
  double total = 0;
  for (int64_t i = 0; i < b; ++i) {
    const int li = labels[static_cast<size_t>(i)];
    if (li < 0 || li >= c) throw InputError("softmax_cross_entropy: label out of range");
    const T* xr = logits->data() + i * c;
    T* pr = probs->data() + i * c;
    T mx = xr[0];
    for (int64_t j = 1; j < c; ++j) mx = std::max(mx, xr[j]);
    double sum = 0;
    for (int64_t j = 0; j < c; ++j) {
      pr[j] = std::exp(xr[j] - mx);
      sum += static_cast<double>(pr[j]);
    }
    const T inv = static_cast<T>(1.0 / sum);
    for (int64_t j = 0; j < c; ++j) pr[j] *= inv;
    const T wi = class_weights.empty() ? T(1) : class_weights[static_cast<size_t>(li)];
    (*weights)[static_cast<size_t>(i)] = wi;
    weight_sum += static_cast<double>(wi);
    total += static_cast<double>(wi) * -std::log(std::max(static_cast<double>(pr[li]), floor));
  }
  if (weight_sum <= 0) throw InputError("softmax_cross_entropy: non-positive weight total");

  auto loss = make_tensor<T>({1});
  loss->values[0] = static_cast<T>(total / weight_sum);
  debug_check(loss, "softmax_cross_entropy");

  if (tape) {
    logits->ensure_grad();
    loss->ensure_grad();
    auto labels_copy = std::make_shared<std::vector<int>>(labels);
    const T inv_wsum = static_cast<T>(1.0 / weight_sum);
    tape->record([logits, probs, loss, labels_copy, weights, inv_wsum, b, c]() {
      const T upstream = loss->grad[0];
      for (int64_t i = 0; i < b; ++i) {
        const T wi = (*weights)[static_cast<size_t>(i)] * inv_wsum * upstream;
        const T* pr = probs->values.data() + i * c;
        T* gr = logits->grad.data() + i * c;
        const int li = (*labels_copy)[static_cast<size_t>(i)];
        for (int64_t j = 0; j < c; ++j) {
          gr[j] += wi * (pr[j] - (j == li ? T(1) : T(0)));
        }
      }
    });
  }
  return {std::move(loss), std::move(probs)};
}

}  // namespace tft::nn

#endif  // TFT_NN_LOSS_HPP_
