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

#ifndef TFT_NN_OPS_HPP_
#define TFT_NN_OPS_HPP_

#include <algorithm>
#include <cmath>

#include "tft/autodiff.hpp"
#include "tft/rng.hpp"
#include "tft/tensor.hpp"

namespace tft::nn {

template <typename T>
inline void debug_check(const TensorPtr<T>& t, const char* op) {
#if TFT_DEBUG_CHECKS
  t->check_finite(op);
#else
  (void)t;
  (void)op;
#endif
}

// y = a + b, elementwise.
template <typename T>
TensorPtr<T> add(Tape<T>* tape, const TensorPtr<T>& a, const TensorPtr<T>& b) {
  if (!a->same_shape(*b)) {
    throw ShapeError("add: shape mismatch " + shape_to_string(a->shape) + " vs " +
                     shape_to_string(b->shape));
  }
  auto y = make_tensor<T>(a->shape);
  const int64_t n = a->numel();
  for (int64_t i = 0; i < n; ++i) y->values[i] = a->values[i] + b->values[i];
  debug_check(y, "add");
  if (tape) {
    a->ensure_grad();
    b->ensure_grad();
    y->ensure_grad();
    tape->record([a, b, y, n]() {
      for (int64_t i = 0; i < n; ++i) {
        a->grad[i] += y->grad[i];
        b->grad[i] += y->grad[i];
      }
    });
  }
  return y;
}

// y = c * x for a compile-time constant factor.
template <typename T>
TensorPtr<T> scale(Tape<T>* tape, const TensorPtr<T>& x, T factor) {
  auto y = make_tensor<T>(x->shape);
  const int64_t n = x->numel();
  for (int64_t i = 0; i < n; ++i) y->values[i] = factor * x->values[i];
  debug_check(y, "scale");
  if (tape) {
    x->ensure_grad();
    y->ensure_grad();
    tape->record([x, y, n, factor]() {
      for (int64_t i = 0; i < n; ++i) x->grad[i] += factor * y->grad[i];
    });
  }
  return y;
}

// y = x + bias where bias has the trailing shape of x and is not a model
// parameter (no gradient); used for additive positional encodings.
template <typename T>
TensorPtr<T> add_fixed(Tape<T>* tape, const TensorPtr<T>& x, const Tensor<T>& bias) {
  const int64_t bn = bias.numel();
  const int64_t n = x->numel();
  if (bn == 0 || n % bn != 0) throw ShapeError("add_fixed: incompatible bias length");
  auto y = make_tensor<T>(x->shape);
  for (int64_t i = 0; i < n; ++i) y->values[i] = x->values[i] + bias.values[i % bn];
  debug_check(y, "add_fixed");
  if (tape) {
    x->ensure_grad();
    y->ensure_grad();
    tape->record([x, y, n]() {
      for (int64_t i = 0; i < n; ++i) x->grad[i] += y->grad[i];
    });
  }
  return y;
}

// max(0, x) with subgradient 0 at 0.
template <typename T>
TensorPtr<T> relu(Tape<T>* tape, const TensorPtr<T>& x) {
  auto y = make_tensor<T>(x->shape);
  const int64_t n = x->numel();
  for (int64_t i = 0; i < n; ++i) y->values[i] = x->values[i] > T(0) ? x->values[i] : T(0);
  debug_check(y, "relu");
  if (tape) {
    x->ensure_grad();
    y->ensure_grad();
    tape->record([x, y, n]() {
      for (int64_t i = 0; i < n; ++i) {
        if (x->values[i] > T(0)) x->grad[i] += y->grad[i];
      }
    });
  }
  return y;
}

// Inverted dropout. Callers gate on (train && rate > 0).
template <typename T>
TensorPtr<T> dropout(Tape<T>* tape, const TensorPtr<T>& x, double rate, Rng& rng) {
  if (rate <= 0.0) return x;
  if (rate >= 1.0) throw ConfigError("dropout rate must be < 1");
  const T keep_scale = T(1.0 / (1.0 - rate));
  const int64_t n = x->numel();
  auto mask = std::make_shared<std::vector<T>>(static_cast<size_t>(n));
  auto y = make_tensor<T>(x->shape);
  for (int64_t i = 0; i < n; ++i) {
    (*mask)[i] = rng.next_double() >= rate ? keep_scale : T(0);
    y->values[i] = x->values[i] * (*mask)[i];
  }
  debug_check(y, "dropout");
  if (tape) {
    x->ensure_grad();
    y->ensure_grad();
    tape->record([x, y, mask, n]() {
      for (int64_t i = 0; i < n; ++i) x->grad[i] += y->grad[i] * (*mask)[i];
    });
  }
  return y;
}

// Affine map over the last axis: y[..., o] = sum_i x[..., i] * w[o, i] + b[o].
// w has shape (n_out, n_in); bias may be null.
template <typename T>
TensorPtr<T> linear(Tape<T>* tape, const TensorPtr<T>& x, const TensorPtr<T>& w,
                    const TensorPtr<T>& bias) {
  if (x->ndim() < 1 || w->ndim() != 2) throw ShapeError("linear: bad ranks");
  const int64_t n_in = x->shape.back();
  const int64_t n_out = w->dim(0);
  if (w->dim(1) != n_in) {
    throw ShapeError("linear: input dim " + std::to_string(n_in) + " vs weight " +
                     shape_to_string(w->shape));
  }
  if (bias && bias->numel() != n_out) throw ShapeError("linear: bias length mismatch");
  const int64_t rows = x->numel() / n_in;

  Shape out_shape = x->shape;
  out_shape.back() = n_out;
  auto y = make_tensor<T>(out_shape);
  gemm_nt_acc(x->data(), w->data(), y->data(), rows, n_in, n_out);
  if (bias) {
    const T* bd = bias->data();
    T* yd = y->data();
    for (int64_t r = 0; r < rows; ++r) {
      T* yrow = yd + r * n_out;
      for (int64_t o = 0; o < n_out; ++o) yrow[o] += bd[o];
    }
  }
  debug_check(y, "linear");
  if (tape) {
    x->ensure_grad();
    w->ensure_grad();
    if (bias) bias->ensure_grad();
    y->ensure_grad();
    tape->record([x, w, bias, y, rows, n_in, n_out]() {
      const T* dy = y->grad.data();
      gemm_nn_acc(dy, w->values.data(), x->grad.data(), rows, n_out, n_in);
      gemm_tn_acc(dy, x->values.data(), w->grad.data(), n_out, rows, n_in);
      if (bias) {
        T* db = bias->grad.data();
        for (int64_t r = 0; r < rows; ++r) {
          const T* dyrow = dy + r * n_out;
          for (int64_t o = 0; o < n_out; ++o) db[o] += dyrow[o];
        }
      }
    });
  }
  return y;
}

// Position-wise feed-forward: linear (e -> ff), ReLU, linear (ff -> e).
template <typename T>
TensorPtr<T> feed_forward(Tape<T>* tape, const TensorPtr<T>& x, const TensorPtr<T>& w_in,
                          const TensorPtr<T>& b_in, const TensorPtr<T>& w_out,
                          const TensorPtr<T>& b_out) {
  return linear(tape, relu(tape, linear(tape, x, w_in, b_in)), w_out, b_out);
}

// Swaps the two trailing axes.
template <typename T>
TensorPtr<T> transpose_last2(Tape<T>* tape, const TensorPtr<T>& x) {
  if (x->ndim() < 2) throw ShapeError("transpose_last2: rank < 2");
  const int64_t a = x->shape[x->shape.size() - 2];
  const int64_t b = x->shape.back();
  const int64_t batches = x->numel() / (a * b);
  Shape out_shape = x->shape;
  out_shape[out_shape.size() - 2] = b;
  out_shape.back() = a;
  auto y = make_tensor<T>(out_shape);
  for (int64_t n = 0; n < batches; ++n) {
    const T* xs = x->data() + n * a * b;
    T* ys = y->data() + n * a * b;
    for (int64_t i = 0; i < a; ++i)
      for (int64_t j = 0; j < b; ++j) ys[j * a + i] = xs[i * b + j];
  }
  if (tape) {
    x->ensure_grad();
    y->ensure_grad();
    tape->record([x, y, batches, a, b]() {
      for (int64_t n = 0; n < batches; ++n) {
        const T* dys = y->grad.data() + n * a * b;
        T* dxs = x->grad.data() + n * a * b;
        for (int64_t i = 0; i < a; ++i)
          for (int64_t j = 0; j < b; ++j) dxs[i * b + j] += dys[j * a + i];
      }
    });
  }
  return y;
}

// Same data, new shape (copying view).
template <typename T>
TensorPtr<T> reshape(Tape<T>* tape, const TensorPtr<T>& x, Shape new_shape) {
  if (shape_numel(new_shape) != x->numel()) {
    throw ShapeError("reshape: element count mismatch " + shape_to_string(x->shape) + " -> " +
                     shape_to_string(new_shape));
  }
  auto y = make_tensor<T>(std::move(new_shape), x->values);
  if (tape) {
    x->ensure_grad();
    y->ensure_grad();
    const int64_t n = x->numel();
    tape->record([x, y, n]() {
      for (int64_t i = 0; i < n; ++i) x->grad[i] += y->grad[i];
    });
  }
  return y;
}

// Batched matrix product: a is (B, M, K); b is (B, K, N), or (B, N, K) when
// trans_b is set. Returns (B, M, N).
template <typename T>
TensorPtr<T> bmm(Tape<T>* tape, const TensorPtr<T>& a, const TensorPtr<T>& b, bool trans_b = false) {
  if (a->ndim() != 3 || b->ndim() != 3 || a->dim(0) != b->dim(0)) {
    throw ShapeError("bmm: expected matching 3-d tensors");
  }
  const int64_t nb = a->dim(0);
  const int64_t m = a->dim(1);
  const int64_t k = a->dim(2);
  const int64_t n = trans_b ? b->dim(1) : b->dim(2);
  const int64_t bk = trans_b ? b->dim(2) : b->dim(1);
  if (bk != k) {
    throw ShapeError("bmm: inner dims " + shape_to_string(a->shape) + " vs " +
                     shape_to_string(b->shape));
  }
  auto y = make_tensor<T>({nb, m, n});
  for (int64_t i = 0; i < nb; ++i) {
    const T* ai = a->data() + i * m * k;
    const T* bi = b->data() + i * k * n;
    T* yi = y->data() + i * m * n;
    if (trans_b) {
      gemm_nt_acc(ai, bi, yi, m, k, n);
    } else {
      gemm_nn_acc(ai, bi, yi, m, k, n);
    }
  }
  debug_check(y, "bmm");
  if (tape) {
    a->ensure_grad();
    b->ensure_grad();
    y->ensure_grad();
    tape->record([a, b, y, nb, m, k, n, trans_b]() {
      for (int64_t i = 0; i < nb; ++i) {
        const T* ai = a->values.data() + i * m * k;
        const T* bi = b->values.data() + i * k * n;
        const T* dyi = y->grad.data() + i * m * n;
        T* dai = a->grad.data() + i * m * k;
        T* dbi = b->grad.data() + i * k * n;
        if (trans_b) {
          // y = a * b^T with b stored (n, k)
          gemm_nn_acc(dyi, bi, dai, m, n, k);
          gemm_tn_acc(dyi, ai, dbi, n, m, k);
        } else {
          gemm_nt_acc(dyi, bi, dai, m, n, k);
          gemm_tn_acc(ai, dyi, dbi, k, m, n);
        }
      }
    });
  }
  return y;
}

// Numerically stable softmax over the last axis.
template <typename T>
TensorPtr<T> softmax_lastdim(Tape<T>* tape, const TensorPtr<T>& x) {
  const int64_t n = x->shape.back();
  const int64_t rows = x->numel() / n;
  auto y = make_tensor<T>(x->shape);
  // scalar exp and fixed-order summation keep results bit-reproducible
  for (int64_t r = 0; r < rows; ++r) {
    const T* xr = x->data() + r * n;
    T* yr = y->data() + r * n;
    T mx = xr[0];
    for (int64_t j = 1; j < n; ++j) mx = std::max(mx, xr[j]);
    T sum = 0;
    for (int64_t j = 0; j < n; ++j) {
      yr[j] = std::exp(xr[j] - mx);
      sum += yr[j];
    }
    const T inv = T(1) / sum;
    for (int64_t j = 0; j < n; ++j) yr[j] *= inv;
  }
  debug_check(y, "softmax");
  if (tape) {
    x->ensure_grad();
    y->ensure_grad();
    tape->record([x, y, rows, n]() {
      for (int64_t r = 0; r < rows; ++r) {
        const T* yr = y->values.data() + r * n;
        const T* dyr = y->grad.data() + r * n;
        T* dxr = x->grad.data() + r * n;
        const T inner = dot(dyr, yr, n);
        for (int64_t j = 0; j < n; ++j) dxr[j] += (dyr[j] - inner) * yr[j];
      }
    });
  }
  return y;
}

// (b, L, h*hd) -> (b*h, L, hd): groups the per-head subspaces into the batch
// axis so attention runs as plain batched matmuls.
template <typename T>
TensorPtr<T> split_heads(Tape<T>* tape, const TensorPtr<T>& x, int64_t heads) {
  if (x->ndim() != 3) throw ShapeError("split_heads: rank != 3");
  const int64_t b = x->dim(0), l = x->dim(1), e = x->dim(2);
  if (e % heads != 0) throw ShapeError("split_heads: embed dim not divisible by head count");
  const int64_t hd = e / heads;
  auto y = make_tensor<T>({b * heads, l, hd});
  for (int64_t bb = 0; bb < b; ++bb)
    for (int64_t ll = 0; ll < l; ++ll) {
      const T* src = x->data() + (bb * l + ll) * e;
      for (int64_t h = 0; h < heads; ++h) {
        T* dst = y->data() + ((bb * heads + h) * l + ll) * hd;
        for (int64_t j = 0; j < hd; ++j) dst[j] = src[h * hd + j];
      }
    }
  if (tape) {
    x->ensure_grad();
    y->ensure_grad();
    tape->record([x, y, b, l, e, heads, hd]() {
      for (int64_t bb = 0; bb < b; ++bb)
        for (int64_t ll = 0; ll < l; ++ll) {
          T* dst = x->grad.data() + (bb * l + ll) * e;
          for (int64_t h = 0; h < heads; ++h) {
            const T* src = y->grad.data() + ((bb * heads + h) * l + ll) * hd;
            for (int64_t j = 0; j < hd; ++j) dst[h * hd + j] += src[j];
          }
        }
    });
  }
  return y;
}

// (b*h, L, hd) -> (b, L, h*hd): inverse of split_heads.
template <typename T>
TensorPtr<T> merge_heads(Tape<T>* tape, const TensorPtr<T>& x, int64_t heads) {
  if (x->ndim() != 3 || x->dim(0) % heads != 0) throw ShapeError("merge_heads: bad shape");
  const int64_t b = x->dim(0) / heads, l = x->dim(1), hd = x->dim(2);
  auto y = make_tensor<T>({b, l, heads * hd});
  for (int64_t bb = 0; bb < b; ++bb)
    for (int64_t ll = 0; ll < l; ++ll) {
      T* dst = y->data() + (bb * l + ll) * heads * hd;
      for (int64_t h = 0; h < heads; ++h) {
        const T* src = x->data() + ((bb * heads + h) * l + ll) * hd;
        for (int64_t j = 0; j < hd; ++j) dst[h * hd + j] = src[j];
      }
    }
  if (tape) {
    x->ensure_grad();
    y->ensure_grad();
    tape->record([x, y, b, l, heads, hd]() {
      for (int64_t bb = 0; bb < b; ++bb)
        for (int64_t ll = 0; ll < l; ++ll) {
          const T* src = y->grad.data() + (bb * l + ll) * heads * hd;
          for (int64_t h = 0; h < heads; ++h) {
            T* dst = x->grad.data() + ((bb * heads + h) * l + ll) * hd;
            for (int64_t j = 0; j < hd; ++j) dst[j] += src[h * hd + j];
          }
        }
    });
  }
  return y;
}

// Mean over axis 1 of a (b, L, e) tensor -> (b, e).
template <typename T>
TensorPtr<T> mean_axis1(Tape<T>* tape, const TensorPtr<T>& x) {
  if (x->ndim() != 3) throw ShapeError("mean_axis1: rank != 3");
  const int64_t b = x->dim(0), l = x->dim(1), e = x->dim(2);
  auto y = make_tensor<T>({b, e});
  const T inv = T(1) / T(l);
  for (int64_t bb = 0; bb < b; ++bb) {
    T* yrow = y->data() + bb * e;
    for (int64_t ll = 0; ll < l; ++ll) {
      const T* xrow = x->data() + (bb * l + ll) * e;
      for (int64_t j = 0; j < e; ++j) yrow[j] += xrow[j];
    }
    for (int64_t j = 0; j < e; ++j) yrow[j] *= inv;
  }
  if (tape) {
    x->ensure_grad();
    y->ensure_grad();
    tape->record([x, y, b, l, e, inv]() {
      for (int64_t bb = 0; bb < b; ++bb) {
        const T* dyrow = y->grad.data() + bb * e;
        for (int64_t ll = 0; ll < l; ++ll) {
          T* dxrow = x->grad.data() + (bb * l + ll) * e;
          for (int64_t j = 0; j < e; ++j) dxrow[j] += dyrow[j] * inv;
        }
      }
    });
  }
  return y;
}

// Concatenates two (b, n) tensors along the last axis.
template <typename T>
TensorPtr<T> concat_lastdim(Tape<T>* tape, const TensorPtr<T>& a, const TensorPtr<T>& b) {
  if (a->ndim() != 2 || b->ndim() != 2 || a->dim(0) != b->dim(0)) {
    throw ShapeError("concat_lastdim: expected (b, n) inputs with equal batch");
  }
  const int64_t rows = a->dim(0), na = a->dim(1), nb = b->dim(1);
  auto y = make_tensor<T>({rows, na + nb});
  for (int64_t r = 0; r < rows; ++r) {
    T* dst = y->data() + r * (na + nb);
    std::copy_n(a->data() + r * na, na, dst);
    std::copy_n(b->data() + r * nb, nb, dst + na);
  }
  if (tape) {
    a->ensure_grad();
    b->ensure_grad();
    y->ensure_grad();
    tape->record([a, b, y, rows, na, nb]() {
      for (int64_t r = 0; r < rows; ++r) {
        const T* src = y->grad.data() + r * (na + nb);
        T* da = a->grad.data() + r * na;
        T* db = b->grad.data() + r * nb;
        for (int64_t j = 0; j < na; ++j) da[j] += src[j];
        for (int64_t j = 0; j < nb; ++j) db[j] += src[na + j];
      }
    });
  }
  return y;
}

}  // namespace tft::nn

#endif  // TFT_NN_OPS_HPP_
