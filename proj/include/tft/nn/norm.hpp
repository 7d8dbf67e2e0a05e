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

#ifndef TFT_NN_NORM_HPP_
#define TFT_NN_NORM_HPP_

#include <cmath>
#include <memory>
#include <type_traits>
#include <vector>

#include "tft/autodiff.hpp"
#include "tft/nn/ops.hpp"
#include "tft/tensor.hpp"

namespace tft::nn {

// Batch normalization over (b, H, W) per channel of a (b, c, H, W) tensor.
// Train mode normalizes with batch statistics (population variance) and
// updates the running buffers in place; eval mode normalizes with the
// running statistics. Variance uses the population convention throughout.
template <typename T>
TensorPtr<T> batchnorm2d(Tape<T>* tape, const TensorPtr<T>& x, const TensorPtr<T>& gamma,
                         const TensorPtr<T>& beta, Tensor<std::type_identity_t<T>>* running_mean,
                         Tensor<std::type_identity_t<T>>* running_var, bool train,
                         std::type_identity_t<T> momentum = T(0.1),
                         std::type_identity_t<T> eps = T(1e-5)) {
  if (x->ndim() != 4) throw ShapeError("batchnorm2d: expected (b, c, H, W)");
  const int64_t b = x->dim(0), c = x->dim(1), h = x->dim(2), w = x->dim(3);
  if (b < 1) throw InputError("batchnorm2d: empty batch");
  const int64_t plane = h * w;
  const int64_t n = b * plane;
  if (train && n < 2) throw InputError("batchnorm2d: train mode needs at least 2 values per channel");
  if (gamma->numel() != c || beta->numel() != c) throw ShapeError("batchnorm2d: affine params must have length c");
  if (!train && (!running_mean || !running_var)) {
    throw InputError("batchnorm2d: eval mode requires running statistics");
  }

  auto mean = std::make_shared<std::vector<T>>(static_cast<size_t>(c));
  auto inv_std = std::make_shared<std::vector<T>>(static_cast<size_t>(c));
  if (train) {
    for (int64_t ci = 0; ci < c; ++ci) {
      double acc = 0;
      for (int64_t bi = 0; bi < b; ++bi) {
        acc += stable_sum(x->data() + (bi * c + ci) * plane, plane);
      }
      const double mu = acc / static_cast<double>(n);
      double vacc = 0;
      for (int64_t bi = 0; bi < b; ++bi) {
        vacc += stable_sq_dev_sum(x->data() + (bi * c + ci) * plane, plane, mu);
      }
      const double var = vacc / static_cast<double>(n);
      (*mean)[ci] = static_cast<T>(mu);
      (*inv_std)[ci] = static_cast<T>(1.0 / std::sqrt(var + static_cast<double>(eps)));
      if (running_mean && running_var) {
        running_mean->values[ci] =
            (T(1) - momentum) * running_mean->values[ci] + momentum * static_cast<T>(mu);
        running_var->values[ci] =
            (T(1) - momentum) * running_var->values[ci] + momentum * static_cast<T>(var);
      }
    }
  } else {
    for (int64_t ci = 0; ci < c; ++ci) {
      (*mean)[ci] = running_mean->values[ci];
      (*inv_std)[ci] =
          static_cast<T>(1.0 / std::sqrt(static_cast<double>(running_var->values[ci]) +
                                         static_cast<double>(eps)));
    }
  }

  auto y = make_tensor<T>(x->shape);
  for (int64_t bi = 0; bi < b; ++bi) {
    for (int64_t ci = 0; ci < c; ++ci) {
      const T* p = x->data() + (bi * c + ci) * plane;
      T* q = y->data() + (bi * c + ci) * plane;
      const T mu = (*mean)[ci];
      const T is = (*inv_std)[ci];
      const T g = gamma->values[ci];
      const T be = beta->values[ci];
      for (int64_t j = 0; j < plane; ++j) q[j] = (p[j] - mu) * is * g + be;
    }
  }
  debug_check(y, "batchnorm2d");

  if (tape) {
    x->ensure_grad();
    gamma->ensure_grad();
    beta->ensure_grad();
    y->ensure_grad();
    tape->record([x, gamma, beta, y, mean, inv_std, b, c, plane, n, train]() {
      for (int64_t ci = 0; ci < c; ++ci) {
        const T mu = (*mean)[ci];
        const T is = (*inv_std)[ci];
        const T g = gamma->values[ci];
        // reductions over the channel
        double sum_dy = 0, sum_dy_xhat = 0;
        for (int64_t bi = 0; bi < b; ++bi) {
          const T* xp = x->values.data() + (bi * c + ci) * plane;
          const T* dyp = y->grad.data() + (bi * c + ci) * plane;
          const double sdy = stable_sum(dyp, plane);
          sum_dy += sdy;
          sum_dy_xhat += (stable_dot(dyp, xp, plane) - static_cast<double>(mu) * sdy) *
                         static_cast<double>(is);
        }
        gamma->grad[ci] += static_cast<T>(sum_dy_xhat);
        beta->grad[ci] += static_cast<T>(sum_dy);
        const T mean_dy = static_cast<T>(sum_dy / static_cast<double>(n));
        const T mean_dy_xhat = static_cast<T>(sum_dy_xhat / static_cast<double>(n));
        for (int64_t bi = 0; bi < b; ++bi) {
          const T* xp = x->values.data() + (bi * c + ci) * plane;
          const T* dyp = y->grad.data() + (bi * c + ci) * plane;
          T* dxp = x->grad.data() + (bi * c + ci) * plane;
          if (train) {
            for (int64_t j = 0; j < plane; ++j) {
              const T xhat = (xp[j] - mu) * is;
              dxp[j] += g * is * (dyp[j] - mean_dy - xhat * mean_dy_xhat);
            }
          } else {
            // running statistics are constants
            for (int64_t j = 0; j < plane; ++j) dxp[j] += g * is * dyp[j];
          }
        }
      }
    });
  }
  return y;
}

// Layer normalization over the last axis with population variance, followed
// by the (gamma, beta) affine map.
template <typename T>
TensorPtr<T> layer_norm(Tape<T>* tape, const TensorPtr<T>& x, const TensorPtr<T>& gamma,
                        const TensorPtr<T>& beta, T eps = T(1e-5)) {
  const int64_t n = x->shape.back();
  if (n < 1) throw ShapeError("layer_norm: empty last axis");
  if (gamma->numel() != n || beta->numel() != n) throw ShapeError("layer_norm: affine params must have length n");
  const int64_t rows = x->numel() / n;

  auto y = make_tensor<T>(x->shape);
  auto inv_std = std::make_shared<std::vector<T>>(static_cast<size_t>(rows));
  auto means = std::make_shared<std::vector<T>>(static_cast<size_t>(rows));
  for (int64_t r = 0; r < rows; ++r) {
    const T* xr = x->data() + r * n;
    double acc = 0;
    for (int64_t j = 0; j < n; ++j) acc += static_cast<double>(xr[j]);
    const double mu = acc / static_cast<double>(n);
    double vacc = 0;
    for (int64_t j = 0; j < n; ++j) {
      const double d = static_cast<double>(xr[j]) - mu;
      vacc += d * d;
    }
    const T is = static_cast<T>(1.0 / std::sqrt(vacc / static_cast<double>(n) + static_cast<double>(eps)));
    (*means)[r] = static_cast<T>(mu);
    (*inv_std)[r] = is;
    T* yr = y->data() + r * n;
    for (int64_t j = 0; j < n; ++j) {
      yr[j] = (xr[j] - static_cast<T>(mu)) * is * gamma->values[j] + beta->values[j];
    }
  }
  debug_check(y, "layer_norm");

  if (tape) {
    x->ensure_grad();
    gamma->ensure_grad();
    beta->ensure_grad();
    y->ensure_grad();
    tape->record([x, gamma, beta, y, means, inv_std, rows, n]() {
      for (int64_t r = 0; r < rows; ++r) {
        const T* xr = x->values.data() + r * n;
        const T* dyr = y->grad.data() + r * n;
        T* dxr = x->grad.data() + r * n;
        const T mu = (*means)[r];
        const T is = (*inv_std)[r];
        double sum_dxhat = 0, sum_dxhat_xhat = 0;
        for (int64_t j = 0; j < n; ++j) {
          const T xhat = (xr[j] - mu) * is;
          const T dxhat = dyr[j] * gamma->values[j];
          gamma->grad[j] += dyr[j] * xhat;
          beta->grad[j] += dyr[j];
          sum_dxhat += static_cast<double>(dxhat);
          sum_dxhat_xhat += static_cast<double>(dxhat) * static_cast<double>(xhat);
        }
        const T m1 = static_cast<T>(sum_dxhat / static_cast<double>(n));
        const T m2 = static_cast<T>(sum_dxhat_xhat / static_cast<double>(n));
        for (int64_t j = 0; j < n; ++j) {
          const T xhat = (xr[j] - mu) * is;
          const T dxhat = dyr[j] * gamma->values[j];
          dxr[j] += is * (dxhat - m1 - xhat * m2);
        }
      }
    });
  }
  return y;
}

}  // namespace tft::nn

#endif  // TFT_NN_NORM_HPP_
