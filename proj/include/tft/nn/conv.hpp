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

#ifndef TFT_NN_CONV_HPP_
#define TFT_NN_CONV_HPP_

#include <algorithm>
#include <string>
#include <vector>

#include "tft/autodiff.hpp"
#include "tft/nn/ops.hpp"
#include "tft/tensor.hpp"

namespace tft::nn {

struct ConvSpec {
  int64_t out_channels = 0;
  int64_t kh = 1, kw = 1;
  int64_t sh = 1, sw = 1;
  int64_t ph = 0, pw = 0;

  void validate() const {
    if (out_channels < 1 || kh < 1 || kw < 1 || sh < 1 || sw < 1 || ph < 0 || pw < 0) {
      throw ConfigError("conv spec: channels/kernel/stride must be positive, padding >= 0");
    }
  }

  int64_t out_h(int64_t h) const { return (h + 2 * ph - kh) / sh + 1; }
  int64_t out_w(int64_t w) const { return (w + 2 * pw - kw) / sw + 1; }
};

namespace detail {

// Valid output range [lo, hi) such that 0 <= ow*stride + offset < extent.
inline std::pair<int64_t, int64_t> valid_out_range(int64_t out_len, int64_t stride,
                                                   int64_t offset, int64_t extent) {
  int64_t lo = 0;
  if (offset < 0) lo = (-offset + stride - 1) / stride;
  int64_t hi = out_len;
  if (offset + (out_len - 1) * stride >= extent) hi = (extent - offset + stride - 1) / stride;
  lo = std::min(lo, out_len);
  hi = std::max(hi, lo);
  return {lo, hi};
}

// Gathers one sample (cin, H, W) into the patch matrix (cin*kh*kw, Ho*Wo)
// used by the GEMM formulation. Rows are zero where the kernel overhangs
// the padding.
template <typename T>
void im2col(const T* x, int64_t cin, int64_t h, int64_t w, const ConvSpec& s, int64_t ho,
            int64_t wo, std::vector<T>& col) {
  col.assign(static_cast<size_t>(cin * s.kh * s.kw * ho * wo), T(0));
  for (int64_t ci = 0; ci < cin; ++ci) {
    const T* plane = x + ci * h * w;
    for (int64_t u = 0; u < s.kh; ++u) {
      const auto [oh_lo, oh_hi] = valid_out_range(ho, s.sh, u - s.ph, h);
      for (int64_t v = 0; v < s.kw; ++v) {
        T* crow = col.data() + ((ci * s.kh + u) * s.kw + v) * ho * wo;
        const auto [ow_lo, ow_hi] = valid_out_range(wo, s.sw, v - s.pw, w);
        for (int64_t oh = oh_lo; oh < oh_hi; ++oh) {
          const int64_t ih = oh * s.sh + u - s.ph;
          const T* src = plane + ih * w + v - s.pw;
          T* dst = crow + oh * wo;
          if (s.sw == 1) {
            std::copy_n(src + ow_lo, ow_hi - ow_lo, dst + ow_lo);
          } else {
            for (int64_t ow = ow_lo; ow < ow_hi; ++ow) dst[ow] = src[ow * s.sw];
          }
        }
      }
    }
  }
}

// Scatter-adds the patch-matrix gradient back onto one input sample.
template <typename T>
void col2im_acc(const std::vector<T>& col, int64_t cin, int64_t h, int64_t w, const ConvSpec& s,
                int64_t ho, int64_t wo, T* dx) {
  for (int64_t ci = 0; ci < cin; ++ci) {
    T* plane = dx + ci * h * w;
    for (int64_t u = 0; u < s.kh; ++u) {
      const auto [oh_lo, oh_hi] = valid_out_range(ho, s.sh, u - s.ph, h);
      for (int64_t v = 0; v < s.kw; ++v) {
        const T* crow = col.data() + ((ci * s.kh + u) * s.kw + v) * ho * wo;
        const auto [ow_lo, ow_hi] = valid_out_range(wo, s.sw, v - s.pw, w);
        for (int64_t oh = oh_lo; oh < oh_hi; ++oh) {
          const int64_t ih = oh * s.sh + u - s.ph;
          T* dst = plane + ih * w + v - s.pw;
          const T* src = crow + oh * wo;
          for (int64_t ow = ow_lo; ow < ow_hi; ++ow) dst[ow * s.sw] += src[ow];
        }
      }
    }
  }
}

}  // namespace detail

// 2-d cross-correlation of x (b, cin, H, W) with w (cout, cin, kh, kw) and an
// optional bias (cout). Output is (b, cout, H', W') with
// H' = floor((H + 2ph - kh)/sh) + 1 and likewise W'.
template <typename T>
TensorPtr<T> conv2d(Tape<T>* tape, const TensorPtr<T>& x, const TensorPtr<T>& w,
                    const TensorPtr<T>& bias, const ConvSpec& spec) {
  spec.validate();
  if (x->ndim() != 4 || w->ndim() != 4) throw ShapeError("conv2d: expected 4-d input and weight");
  const int64_t b = x->dim(0), cin = x->dim(1), h = x->dim(2), ww = x->dim(3);
  const int64_t cout = w->dim(0);
  if (cout != spec.out_channels || w->dim(1) != cin || w->dim(2) != spec.kh || w->dim(3) != spec.kw) {
    throw ShapeError("conv2d: weight shape " + shape_to_string(w->shape) +
                     " inconsistent with spec/input");
  }
  if (h + 2 * spec.ph < spec.kh || ww + 2 * spec.pw < spec.kw) {
    throw ShapeError("conv2d: kernel larger than padded input");
  }
  if (bias && bias->numel() != cout) throw ShapeError("conv2d: bias length mismatch");

  const int64_t ho = spec.out_h(h);
  const int64_t wo = spec.out_w(ww);
  const int64_t ckk = cin * spec.kh * spec.kw;
  const int64_t owo = ho * wo;

  auto y = make_tensor<T>({b, cout, ho, wo});
  std::vector<T> col;
  for (int64_t i = 0; i < b; ++i) {
    detail::im2col(x->data() + i * cin * h * ww, cin, h, ww, spec, ho, wo, col);
    T* yi = y->data() + i * cout * owo;
    gemm_nn_acc(w->data(), col.data(), yi, cout, ckk, owo);
    if (bias) {
      for (int64_t co = 0; co < cout; ++co) {
        const T bv = bias->values[static_cast<size_t>(co)];
        T* row = yi + co * owo;
        for (int64_t j = 0; j < owo; ++j) row[j] += bv;
      }
    }
  }
  debug_check(y, "conv2d");

  if (tape) {
    x->ensure_grad();
    w->ensure_grad();
    if (bias) bias->ensure_grad();
    y->ensure_grad();
    ConvSpec s = spec;
    tape->record([x, w, bias, y, s, b, cin, h, ww, cout, ho, wo, ckk, owo]() {
      std::vector<T> col, dcol(static_cast<size_t>(ckk * owo));
      for (int64_t i = 0; i < b; ++i) {
        const T* dyi = y->grad.data() + i * cout * owo;
        // weight gradient needs the patches again
        detail::im2col(x->values.data() + i * cin * h * ww, cin, h, ww, s, ho, wo, col);
        gemm_nt_acc(dyi, col.data(), w->grad.data(), cout, owo, ckk);
        // input gradient: dcol = w^T * dy, scattered back
        std::fill(dcol.begin(), dcol.end(), T(0));
        gemm_tn_acc(w->values.data(), dyi, dcol.data(), ckk, cout, owo);
        detail::col2im_acc(dcol, cin, h, ww, s, ho, wo, x->grad.data() + i * cin * h * ww);
        if (bias) {
          for (int64_t co = 0; co < cout; ++co) {
            const T* row = dyi + co * owo;
            T acc = 0;
            for (int64_t j = 0; j < owo; ++j) acc += row[j];
            bias->grad[static_cast<size_t>(co)] += acc;
          }
        }
      }
    });
  }
  return y;
}

}  // namespace tft::nn

#endif  // TFT_NN_CONV_HPP_
