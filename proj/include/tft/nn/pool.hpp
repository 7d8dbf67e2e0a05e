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

#ifndef TFT_NN_POOL_HPP_
#define TFT_NN_POOL_HPP_

#include <cmath>
#include <memory>
#include <vector>

#include "tft/autodiff.hpp"
#include "tft/nn/ops.hpp"
#include "tft/tensor.hpp"

namespace tft::nn {

// Mean over the channel axis: (b, c, H, W) -> (b, H, W).
template <typename T>
TensorPtr<T> channel_mean(Tape<T>* tape, const TensorPtr<T>& x) {
  if (x->ndim() != 4) throw ShapeError("channel_mean: expected (b, c, H, W)");
  const int64_t b = x->dim(0), c = x->dim(1), plane = x->dim(2) * x->dim(3);
  if (c < 1) throw ShapeError("channel_mean: no channels");
  auto y = make_tensor<T>({x->dim(0), x->dim(2), x->dim(3)});
  const T inv = T(1) / T(c);
  for (int64_t bi = 0; bi < b; ++bi) {
    T* q = y->data() + bi * plane;
    for (int64_t ci = 0; ci < c; ++ci) {
      const T* p = x->data() + (bi * c + ci) * plane;
      for (int64_t j = 0; j < plane; ++j) q[j] += p[j];
    }
    for (int64_t j = 0; j < plane; ++j) q[j] *= inv;
  }
  if (tape) {
    x->ensure_grad();
    y->ensure_grad();
    tape->record([x, y, b, c, plane, inv]() {
      for (int64_t bi = 0; bi < b; ++bi) {
        const T* dq = y->grad.data() + bi * plane;
        for (int64_t ci = 0; ci < c; ++ci) {
          T* dp = x->grad.data() + (bi * c + ci) * plane;
          for (int64_t j = 0; j < plane; ++j) dp[j] += dq[j] * inv;
        }
      }
    });
  }
  return y;
}

// Pools a (b, F, T) tensor along the frequency axis F into per-column mean
// and population standard deviation, concatenated as [means | stds] of
// length 2T.
template <typename T>
TensorPtr<T> mean_std_pool(Tape<T>* tape, const TensorPtr<T>& x) {
  if (x->ndim() != 3) throw ShapeError("mean_std_pool: expected (b, F, T)");
  const int64_t b = x->dim(0), f = x->dim(1), t = x->dim(2);
  if (f < 1) throw ShapeError("mean_std_pool: empty frequency axis");
  auto y = make_tensor<T>({b, 2 * t});
  auto means = std::make_shared<std::vector<T>>(static_cast<size_t>(b * t));
  auto stds = std::make_shared<std::vector<T>>(static_cast<size_t>(b * t));
  const double invf = 1.0 / static_cast<double>(f);
  for (int64_t bi = 0; bi < b; ++bi) {
    const T* xs = x->data() + bi * f * t;
    T* yr = y->data() + bi * 2 * t;
    for (int64_t tt = 0; tt < t; ++tt) {
      double acc = 0;
      for (int64_t ff = 0; ff < f; ++ff) acc += static_cast<double>(xs[ff * t + tt]);
      const double mu = acc * invf;
      double vacc = 0;
      for (int64_t ff = 0; ff < f; ++ff) {
        const double d = static_cast<double>(xs[ff * t + tt]) - mu;
        vacc += d * d;
      }
      const double sd = std::sqrt(vacc * invf);
      (*means)[bi * t + tt] = static_cast<T>(mu);
      (*stds)[bi * t + tt] = static_cast<T>(sd);
      yr[tt] = static_cast<T>(mu);
      yr[t + tt] = static_cast<T>(sd);
    }
  }
  debug_check(y, "mean_std_pool");
  if (tape) {
    x->ensure_grad();
    y->ensure_grad();
    tape->record([x, y, means, stds, b, f, t]() {
      const T invf = T(1) / T(f);
      for (int64_t bi = 0; bi < b; ++bi) {
        const T* xs = x->values.data() + bi * f * t;
        const T* dyr = y->grad.data() + bi * 2 * t;
        T* dxs = x->grad.data() + bi * f * t;
        for (int64_t tt = 0; tt < t; ++tt) {
          const T dmu = dyr[tt];
          const T dsd = dyr[t + tt];
          const T mu = (*means)[bi * t + tt];
          const T sd = (*stds)[bi * t + tt];
          // subgradient 0 for the std term at sd == 0
          const T sd_coeff = sd > T(0) ? dsd * invf / sd : T(0);
          for (int64_t ff = 0; ff < f; ++ff) {
            dxs[ff * t + tt] += dmu * invf + sd_coeff * (xs[ff * t + tt] - mu);
          }
        }
      }
    });
  }
  return y;
}

}  // namespace tft::nn

#endif  // TFT_NN_POOL_HPP_
