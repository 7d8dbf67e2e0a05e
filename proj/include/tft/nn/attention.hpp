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

#ifndef TFT_NN_ATTENTION_HPP_
#define TFT_NN_ATTENTION_HPP_

#include <cmath>
#include <string>
#include <utility>

#include "tft/autodiff.hpp"
#include "tft/nn/init.hpp"
#include "tft/nn/ops.hpp"
#include "tft/rng.hpp"
#include "tft/tensor.hpp"

namespace tft::nn {

struct AttentionSpec {
  int64_t embed_dim = 0;
  int64_t n_heads = 1;
  int64_t ff_dim = 0;

  void validate() const {
    if (embed_dim < 1 || n_heads < 1 || ff_dim < 1) {
      throw ConfigError("attention spec: dims must be positive");
    }
    if (embed_dim % n_heads != 0) {
      throw ConfigError("attention spec: embed_dim " + std::to_string(embed_dim) +
                        " not divisible by " + std::to_string(n_heads) + " heads");
    }
  }
};

// Input/output projection weights of one attention block. Weight matrices
// are (embed, embed) in the (n_out, n_in) layout of nn::linear.
template <typename T>
struct AttentionWeights {
  TensorPtr<T> wq, bq, wk, bk, wv, bv, wo, bo;

  static AttentionWeights init(int64_t embed, Rng& rng) {
    AttentionWeights w;
    auto mk = [&](TensorPtr<T>& m, TensorPtr<T>& b) {
      m = make_tensor<T>({embed, embed});
      init_uniform_fanin(*m, embed, rng);
      b = make_tensor<T>({embed});
      init_uniform_fanin(*b, embed, rng);
    };
    mk(w.wq, w.bq);
    mk(w.wk, w.bk);
    mk(w.wv, w.bv);
    mk(w.wo, w.bo);
    return w;
  }
};

template <typename T>
struct AttentionResult {
  TensorPtr<T> out;   // (b, Lq, e)
  TensorPtr<T> attn;  // (b, heads, Lq, Lk), row-stochastic over Lk
};

// Multi-head scaled dot-product attention. Self-attention passes the same
// tensor for q, k and v; cross-attention passes distinct sources. k and v
// must share their sequence length.
template <typename T>
AttentionResult<T> multi_head_attention(Tape<T>* tape, const TensorPtr<T>& q,
                                        const TensorPtr<T>& k, const TensorPtr<T>& v,
                                        const AttentionSpec& spec,
                                        const AttentionWeights<T>& w) {
  spec.validate();
  const int64_t e = spec.embed_dim;
  if (q->ndim() != 3 || k->ndim() != 3 || v->ndim() != 3) {
    throw ShapeError("attention: expected (b, L, e) inputs");
  }
  if (q->dim(2) != e || k->dim(2) != e || v->dim(2) != e) {
    throw ShapeError("attention: embed dim mismatch with spec");
  }
  if (q->dim(0) != k->dim(0) || q->dim(0) != v->dim(0)) {
    throw ShapeError("attention: batch mismatch");
  }
  if (k->dim(1) != v->dim(1)) throw ShapeError("attention: key/value length mismatch");

  const int64_t b = q->dim(0);
  const int64_t lq = q->dim(1);
  const int64_t lk = k->dim(1);
  const int64_t heads = spec.n_heads;
  const int64_t hd = e / heads;

  auto qp = split_heads(tape, linear(tape, q, w.wq, w.bq), heads);  // (b*h, Lq, hd)
  auto kp = split_heads(tape, linear(tape, k, w.wk, w.bk), heads);  // (b*h, Lk, hd)
  auto vp = split_heads(tape, linear(tape, v, w.wv, w.bv), heads);  // (b*h, Lk, hd)

  auto scores = scale(tape, bmm(tape, qp, kp, /*trans_b=*/true),
                      static_cast<T>(1.0 / std::sqrt(static_cast<double>(hd))));
  auto attn = softmax_lastdim(tape, scores);        // (b*h, Lq, Lk)
  auto ctx = merge_heads(tape, bmm(tape, attn, vp), heads);
  auto out = linear(tape, ctx, w.wo, w.bo);

  // detached copy for visualization / inspection
  auto attn_map = make_tensor<T>({b, heads, lq, lk}, attn->values);
  return {std::move(out), std::move(attn_map)};
}

}  // namespace tft::nn

#endif  // TFT_NN_ATTENTION_HPP_
