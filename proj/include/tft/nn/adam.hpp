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

#ifndef TFT_NN_ADAM_HPP_
#define TFT_NN_ADAM_HPP_

#include <cmath>
#include <cstdint>
#include <vector>

#include "tft/autodiff.hpp"
#include "tft/tensor.hpp"

namespace tft::nn {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.0;  // L2 term added to the gradient; 0 disables
  double grad_clip = 0.0;     // global-norm clip threshold; 0 disables
};

// Bias-corrected Adam over the trainable entries of a parameter list.
// Moment buffers are indexed in parameter order so checkpoints can persist
// and restore them exactly.
template <typename T>
class Adam {
 public:
  Adam(const ParameterList<T>& params, AdamConfig cfg) : cfg_(cfg) {
    for (const auto& p : params) {
      if (!p.trainable) continue;
      params_.push_back(p);
      m_.emplace_back(p.tensor->values.size(), T(0));
      v_.emplace_back(p.tensor->values.size(), T(0));
      p.tensor->ensure_grad();
    }
  }

  void zero_grad() {
    for (auto& p : params_) p.tensor->zero_grad();
  }

  void step() {
    ++step_;
    if (cfg_.grad_clip > 0) clip_global_norm();
    const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(step_));
    const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(step_));
    for (size_t pi = 0; pi < params_.size(); ++pi) {
      auto& t = *params_[pi].tensor;
      auto& m = m_[pi];
      auto& v = v_[pi];
      for (size_t i = 0; i < t.values.size(); ++i) {
        double g = static_cast<double>(t.grad[i]);
        if (cfg_.weight_decay > 0) g += cfg_.weight_decay * static_cast<double>(t.values[i]);
        const double mi = cfg_.beta1 * static_cast<double>(m[i]) + (1.0 - cfg_.beta1) * g;
        const double vi = cfg_.beta2 * static_cast<double>(v[i]) + (1.0 - cfg_.beta2) * g * g;
        m[i] = static_cast<T>(mi);
        v[i] = static_cast<T>(vi);
        const double mhat = mi / bc1;
        const double vhat = vi / bc2;
        t.values[i] -= static_cast<T>(cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps));
      }
    }
  }

  uint64_t step_count() const { return step_; }
  void set_step_count(uint64_t s) { step_ = s; }
  void set_lr(double lr) { cfg_.lr = lr; }
  double lr() const { return cfg_.lr; }

  size_t size() const { return params_.size(); }
  const Parameter<T>& param(size_t i) const { return params_[i]; }
  std::vector<T>& moment1(size_t i) { return m_[i]; }
  std::vector<T>& moment2(size_t i) { return v_[i]; }

 private:
  void clip_global_norm() {
    double sq = 0;
    for (auto& p : params_) {
      for (const T& g : p.tensor->grad) sq += static_cast<double>(g) * static_cast<double>(g);
    }
    const double norm = std::sqrt(sq);
    if (norm <= cfg_.grad_clip || norm == 0) return;
    const T factor = static_cast<T>(cfg_.grad_clip / norm);
    for (auto& p : params_) {
      for (T& g : p.tensor->grad) g *= factor;
    }
  }

  AdamConfig cfg_;
  ParameterList<T> params_;
  std::vector<std::vector<T>> m_, v_;
  uint64_t step_ = 0;
};

}  // namespace tft::nn

#endif  // TFT_NN_ADAM_HPP_
