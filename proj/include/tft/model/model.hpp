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

#ifndef TFT_MODEL_MODEL_HPP_
#define TFT_MODEL_MODEL_HPP_

#include <cmath>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tft/autodiff.hpp"
#include "tft/model/config.hpp"
#include "tft/nn/adam.hpp"
#include "tft/nn/attention.hpp"
#include "tft/nn/conv.hpp"
#include "tft/nn/init.hpp"
#include "tft/nn/loss.hpp"
#include "tft/nn/norm.hpp"
#include "tft/nn/ops.hpp"
#include "tft/nn/pool.hpp"
#include "tft/rng.hpp"
#include "tft/tensor.hpp"

namespace tft {

namespace layers {

template <typename T>
struct Conv2d {
  nn::ConvSpec spec;
  TensorPtr<T> weight, bias;

  void init(int64_t cin, Rng& rng) {
    const int64_t fan_in = cin * spec.kh * spec.kw;
    weight = make_tensor<T>({spec.out_channels, cin, spec.kh, spec.kw});
    nn::init_uniform_fanin(*weight, fan_in, rng);
    bias = make_tensor<T>({spec.out_channels});
    nn::init_uniform_fanin(*bias, fan_in, rng);
  }
  TensorPtr<T> forward(Tape<T>* tape, const TensorPtr<T>& x) const {
    return nn::conv2d(tape, x, weight, bias, spec);
  }
  void collect(ParameterList<T>& out, const std::string& prefix) const {
    out.push_back({weight, prefix + ".weight", true});
    out.push_back({bias, prefix + ".bias", true});
  }
};

template <typename T>
struct BatchNorm2d {
  TensorPtr<T> gamma, beta;
  TensorPtr<T> running_mean, running_var;
  T momentum = T(0.1);
  T eps = T(1e-5);

  void init(int64_t channels) {
    gamma = make_tensor<T>({channels}, T(1));
    beta = make_tensor<T>({channels}, T(0));
    running_mean = make_tensor<T>({channels}, T(0));
    running_var = make_tensor<T>({channels}, T(1));
  }
  TensorPtr<T> forward(Tape<T>* tape, const TensorPtr<T>& x, bool train) const {
    return nn::batchnorm2d(tape, x, gamma, beta, running_mean.get(), running_var.get(), train,
                           momentum, eps);
  }
  void collect(ParameterList<T>& out, const std::string& prefix) const {
    out.push_back({gamma, prefix + ".gamma", true});
    out.push_back({beta, prefix + ".beta", true});
    out.push_back({running_mean, prefix + ".running_mean", false});
    out.push_back({running_var, prefix + ".running_var", false});
  }
};

template <typename T>
struct Linear {
  TensorPtr<T> weight, bias;

  void init(int64_t n_in, int64_t n_out, Rng& rng) {
    weight = make_tensor<T>({n_out, n_in});
    nn::init_uniform_fanin(*weight, n_in, rng);
    bias = make_tensor<T>({n_out});
    nn::init_uniform_fanin(*bias, n_in, rng);
  }
  TensorPtr<T> forward(Tape<T>* tape, const TensorPtr<T>& x) const {
    return nn::linear(tape, x, weight, bias);
  }
  void collect(ParameterList<T>& out, const std::string& prefix) const {
    out.push_back({weight, prefix + ".weight", true});
    out.push_back({bias, prefix + ".bias", true});
  }
};

template <typename T>
struct LayerNorm {
  TensorPtr<T> gamma, beta;

  void init(int64_t n) {
    gamma = make_tensor<T>({n}, T(1));
    beta = make_tensor<T>({n}, T(0));
  }
  TensorPtr<T> forward(Tape<T>* tape, const TensorPtr<T>& x) const {
    return nn::layer_norm(tape, x, gamma, beta);
  }
  void collect(ParameterList<T>& out, const std::string& prefix) const {
    out.push_back({gamma, prefix + ".gamma", true});
    out.push_back({beta, prefix + ".beta", true});
  }
};

// One post-norm transformer block: attention + residual + layer norm, then
// a position-wise ReLU feed-forward + residual + layer norm. The residual of
// the attention sub-layer attaches to the value stream, which for
// self-attention is the block input itself.
template <typename T>
struct EncoderBlock {
  nn::AttentionSpec spec;
  nn::AttentionWeights<T> attn;
  LayerNorm<T> ln_attn, ln_ff;
  Linear<T> ff_in, ff_out;

  void init(Rng& rng) {
    attn = nn::AttentionWeights<T>::init(spec.embed_dim, rng);
    ln_attn.init(spec.embed_dim);
    ln_ff.init(spec.embed_dim);
    ff_in.init(spec.embed_dim, spec.ff_dim, rng);
    ff_out.init(spec.ff_dim, spec.embed_dim, rng);
  }

  struct Result {
    TensorPtr<T> out;
    TensorPtr<T> attn_map;   // (b, heads, Lq, Lk)
    TensorPtr<T> post_attn;  // normalized residual sum after attention
  };

  Result forward(Tape<T>* tape, const TensorPtr<T>& q, const TensorPtr<T>& k,
                 const TensorPtr<T>& v, double dropout, Rng* dropout_rng) const {
    auto att = nn::multi_head_attention(tape, q, k, v, spec, attn);
    auto a = att.out;
    if (dropout > 0 && dropout_rng) a = nn::dropout(tape, a, dropout, *dropout_rng);
    auto mid = ln_attn.forward(tape, nn::add(tape, a, v));
    auto hidden = nn::relu(tape, ff_in.forward(tape, mid));
    if (dropout > 0 && dropout_rng) hidden = nn::dropout(tape, hidden, dropout, *dropout_rng);
    auto ff = ff_out.forward(tape, hidden);
    auto out = ln_ff.forward(tape, nn::add(tape, ff, mid));
    return {out, att.attn, mid};
  }

  void collect(ParameterList<T>& out, const std::string& prefix) const {
    out.push_back({attn.wq, prefix + ".attn.wq", true});
    out.push_back({attn.bq, prefix + ".attn.bq", true});
    out.push_back({attn.wk, prefix + ".attn.wk", true});
    out.push_back({attn.bk, prefix + ".attn.bk", true});
    out.push_back({attn.wv, prefix + ".attn.wv", true});
    out.push_back({attn.bv, prefix + ".attn.bv", true});
    out.push_back({attn.wo, prefix + ".attn.wo", true});
    out.push_back({attn.bo, prefix + ".attn.bo", true});
    ln_attn.collect(out, prefix + ".ln_attn");
    ln_ff.collect(out, prefix + ".ln_ff");
    ff_in.collect(out, prefix + ".ff_in");
    ff_out.collect(out, prefix + ".ff_out");
  }
};

// A stack of encoder blocks. Self mode feeds each block its own output as
// query, key and value. Cross mode feeds (q, k, v) to the first block and
// self-attends any further blocks on the running output.
template <typename T>
struct TransformerEncoder {
  nn::AttentionSpec spec;
  std::vector<EncoderBlock<T>> blocks;

  void init(int64_t depth, Rng& rng) {
    blocks.resize(static_cast<size_t>(depth));
    for (auto& b : blocks) {
      b.spec = spec;
      b.init(rng);
    }
  }

  typename EncoderBlock<T>::Result forward_self(Tape<T>* tape, const TensorPtr<T>& x,
                                                double dropout, Rng* rng) const {
    TensorPtr<T> cur = x;
    typename EncoderBlock<T>::Result last;
    for (const auto& b : blocks) {
      last = b.forward(tape, cur, cur, cur, dropout, rng);
      cur = last.out;
    }
    return last;
  }

  typename EncoderBlock<T>::Result forward_cross(Tape<T>* tape, const TensorPtr<T>& q,
                                                 const TensorPtr<T>& k, const TensorPtr<T>& v,
                                                 double dropout, Rng* rng) const {
    auto first = blocks.front().forward(tape, q, k, v, dropout, rng);
    TensorPtr<T> cur = first.out;
    for (size_t i = 1; i < blocks.size(); ++i) {
      cur = blocks[i].forward(tape, cur, cur, cur, dropout, rng).out;
    }
    // report the cross-attention map regardless of depth
    return {cur, first.attn_map, first.post_attn};
  }

  void collect(ParameterList<T>& out, const std::string& prefix) const {
    for (size_t i = 0; i < blocks.size(); ++i) {
      blocks[i].collect(out, prefix + ".block" + std::to_string(i));
    }
  }
};

}  // namespace layers

// Named intermediates of one forward pass, for shape checks and the
// attention export. All entries are shared views of the tensors the tape
// used; shapes follow the module contracts.
template <typename T>
struct ForwardTrace {
  TensorPtr<T> time_conv;      // (b, c1, f/4, d)
  TensorPtr<T> time_tokens;    // (b, d, f/4)
  TensorPtr<T> time_post_attn; // (b, d, f/4)
  TensorPtr<T> time_encoded;   // (b, d, f/4)
  TensorPtr<T> time_attn;      // (b, heads, d, d)

  TensorPtr<T> freq_conv;      // (b, c1, f, d/4)
  TensorPtr<T> freq_tokens;    // (b, f, d/4)
  TensorPtr<T> freq_post_attn; // (b, f, d/4)
  TensorPtr<T> freq_encoded;   // (b, f, d/4)
  TensorPtr<T> freq_attn;      // (b, heads, f, f)

  TensorPtr<T> fusion_conv;      // (b, c1, f/4, d/4)
  TensorPtr<T> value_tokens;     // (b, f/4, d/4)
  TensorPtr<T> query;            // (b, f/4, d/4)
  TensorPtr<T> key;              // (b, f/4, d/4)
  TensorPtr<T> fusion_post_attn; // (b, f/4, d/4)
  TensorPtr<T> fused;            // (b, f/4, d/4)
  TensorPtr<T> fusion_attn;      // (b, heads, f/4, f/4)

  TensorPtr<T> pooled;  // (b, d/2)
  TensorPtr<T> logits;  // (b, n_classes)
  TensorPtr<T> probs;   // (b, n_classes), detached softmax of the logits
};

// Softmax over the last axis without touching any tape.
template <typename T>
Tensor<T> softmax_values(const Tensor<T>& x) {
  const int64_t n = x.shape.back();
  const int64_t rows = x.numel() / n;
  Tensor<T> y(x.shape);
  for (int64_t r = 0; r < rows; ++r) {
    const T* xr = x.data() + r * n;
    T* yr = y.data() + r * n;
    T mx = xr[0];
    for (int64_t j = 1; j < n; ++j) mx = std::max(mx, xr[j]);
    double sum = 0;
    for (int64_t j = 0; j < n; ++j) {
      yr[j] = std::exp(xr[j] - mx);
      sum += static_cast<double>(yr[j]);
    }
    const T inv = static_cast<T>(1.0 / sum);
    for (int64_t j = 0; j < n; ++j) yr[j] *= inv;
  }
  return y;
}

// The three-branch time-frequency model: a frame-axis-preserving conv stack
// plus transformer over frame positions, a band-axis-preserving conv stack
// plus transformer over band positions, and a cross-attention fusion encoder
// over jointly reduced features, followed by a mean/std pooling classifier.
template <typename T>
class Model {
 public:
  Model(ModelConfig cfg, uint64_t seed) : cfg_(std::move(cfg)), dropout_rng_(Rng::mix(seed, 0x17)) {
    cfg_.validate();
    Rng rng(seed);
    build(rng);
    collect_parameters();
  }

  const ModelConfig& config() const { return cfg_; }
  ParameterList<T>& parameters() { return params_; }
  const ParameterList<T>& parameters() const { return params_; }

  int64_t parameter_count(bool trainable_only = true) const {
    int64_t n = 0;
    for (const auto& p : params_) {
      if (!trainable_only || p.trainable) n += p.tensor->numel();
    }
    return n;
  }

  void reseed_dropout(uint64_t stream) { dropout_rng_ = Rng(stream); }

  // Frame-axis branch: reduce bands by 4, tokenize frames, self-attend.
  TensorPtr<T> time_branch(Tape<T>* tape, const TensorPtr<T>& x, bool train,
                           ForwardTrace<T>* trace = nullptr) const {
    check_input(x);
    auto h = conv_stack(tape, x, time_conv1_, time_bn1_, time_conv2_, time_bn2_, train);
    if (trace) trace->time_conv = h;
    auto tokens = nn::transpose_last2(tape, nn::channel_mean(tape, h));  // (b, d, f/4)
    if (cfg_.positional_encoding) tokens = nn::add_fixed(tape, tokens, time_pos_);
    if (trace) trace->time_tokens = tokens;
    auto enc = time_encoder_.forward_self(tape, tokens, train ? cfg_.dropout : 0.0,
                                          train ? &dropout_rng_ : nullptr);
    if (trace) {
      trace->time_post_attn = enc.post_attn;
      trace->time_encoded = enc.out;
      trace->time_attn = enc.attn_map;
    }
    return enc.out;
  }

  // Band-axis branch: reduce frames by 4, tokenize bands, self-attend.
  TensorPtr<T> freq_branch(Tape<T>* tape, const TensorPtr<T>& x, bool train,
                           ForwardTrace<T>* trace = nullptr) const {
    check_input(x);
    auto h = conv_stack(tape, x, freq_conv1_, freq_bn1_, freq_conv2_, freq_bn2_, train);
    if (trace) trace->freq_conv = h;
    auto tokens = nn::channel_mean(tape, h);  // (b, f, d/4); band positions are the sequence
    if (cfg_.positional_encoding) tokens = nn::add_fixed(tape, tokens, freq_pos_);
    if (trace) trace->freq_tokens = tokens;
    auto enc = freq_encoder_.forward_self(tape, tokens, train ? cfg_.dropout : 0.0,
                                          train ? &dropout_rng_ : nullptr);
    if (trace) {
      trace->freq_post_attn = enc.post_attn;
      trace->freq_encoded = enc.out;
      trace->freq_attn = enc.attn_map;
    }
    return enc.out;
  }

  // Maps the branch encodings onto the fusion grid: queries from the
  // frame-axis encoding, keys from the band-axis encoding.
  std::pair<TensorPtr<T>, TensorPtr<T>> project_qk(Tape<T>* tape, const TensorPtr<T>& time_enc,
                                                   const TensorPtr<T>& freq_enc) const {
    auto q = query_proj_.forward(tape, nn::transpose_last2(tape, time_enc));
    auto k = nn::transpose_last2(tape, key_proj_.forward(tape, nn::transpose_last2(tape, freq_enc)));
    return {q, k};
  }

  // Joint conv reduction to the value grid: (b, c_in, f, d) -> (b, f/4, d/4).
  TensorPtr<T> value_grid(Tape<T>* tape, const TensorPtr<T>& x, bool train,
                          ForwardTrace<T>* trace = nullptr) const {
    check_input(x);
    auto h = conv_stack(tape, x, fusion_conv1_, fusion_bn1_, fusion_conv2_, fusion_bn2_, train);
    if (trace) trace->fusion_conv = h;
    auto v = nn::channel_mean(tape, h);
    if (trace) trace->value_tokens = v;
    return v;
  }

  // Cross-attention fusion over a precomputed value grid.
  TensorPtr<T> fuse(Tape<T>* tape, const TensorPtr<T>& v, const TensorPtr<T>& q,
                    const TensorPtr<T>& k, bool train, ForwardTrace<T>* trace = nullptr) const {
    auto enc = fusion_encoder_.forward_cross(tape, q, k, v, train ? cfg_.dropout : 0.0,
                                             train ? &dropout_rng_ : nullptr);
    if (trace) {
      trace->fusion_post_attn = enc.post_attn;
      trace->fused = enc.out;
      trace->fusion_attn = enc.attn_map;
    }
    return enc.out;
  }

  // Joint conv reduction followed by cross-attention fusion.
  TensorPtr<T> fusion_forward(Tape<T>* tape, const TensorPtr<T>& x, const TensorPtr<T>& q,
                              const TensorPtr<T>& k, bool train,
                              ForwardTrace<T>* trace = nullptr) const {
    auto v = value_grid(tape, x, train, trace);
    return fuse(tape, v, q, k, train, trace);
  }

  // Mean/std pooling over the band axis, then the fully connected map.
  std::pair<TensorPtr<T>, TensorPtr<T>> classify(Tape<T>* tape, const TensorPtr<T>& fused) const {
    auto pooled = nn::mean_std_pool(tape, fused);
    auto logits = classifier_.forward(tape, pooled);
    return {logits, pooled};
  }

  struct Output {
    TensorPtr<T> logits;
    Tensor<T> probs;
    ForwardTrace<T> trace;
  };

  Output forward(Tape<T>* tape, const TensorPtr<T>& x, bool train) const {
    Output out;
    ForwardTrace<T>& tr = out.trace;

    TensorPtr<T> time_enc, freq_enc;
    if (cfg_.use_time) time_enc = time_branch(tape, x, train, &tr);
    if (cfg_.use_freq) freq_enc = freq_branch(tape, x, train, &tr);

    TensorPtr<T> pooled;
    if (cfg_.use_fusion) {
      auto v = value_grid(tape, x, train, &tr);
      TensorPtr<T> q, k;
      if (cfg_.use_time && cfg_.use_freq) {
        std::tie(q, k) = project_qk(tape, time_enc, freq_enc);
      } else if (cfg_.use_time) {
        // the missing branch is replaced by a learned map of the value grid
        q = query_proj_.forward(tape, nn::transpose_last2(tape, time_enc));
        k = key_from_value_.forward(tape, v);
      } else {
        q = query_from_value_.forward(tape, v);
        k = nn::transpose_last2(tape, key_proj_.forward(tape, nn::transpose_last2(tape, freq_enc)));
      }
      tr.query = q;
      tr.key = k;
      auto fused = fuse(tape, v, q, k, train, &tr);
      auto cls = classify(tape, fused);
      out.logits = cls.first;
      pooled = cls.second;
    } else {
      // decision-level variant: concatenate the mean-pooled branch encodings
      auto time_vec = nn::mean_axis1(tape, time_enc);
      auto freq_vec = nn::mean_axis1(tape, freq_enc);
      pooled = nn::concat_lastdim(tape, time_vec, freq_vec);
      out.logits = classifier_.forward(tape, pooled);
    }
    tr.pooled = pooled;
    tr.logits = out.logits;
    out.probs = softmax_values(*out.logits);
    tr.probs = std::make_shared<Tensor<T>>(out.probs);
    return out;
  }

 private:
  void check_input(const TensorPtr<T>& x) const {
    if (x->ndim() != 4 || x->dim(1) != cfg_.c_in || x->dim(2) != cfg_.f || x->dim(3) != cfg_.d) {
      throw ShapeError("model: input must be (b, " + std::to_string(cfg_.c_in) + ", " +
                       std::to_string(cfg_.f) + ", " + std::to_string(cfg_.d) + "), got " +
                       shape_to_string(x->shape));
    }
  }

  TensorPtr<T> conv_stack(Tape<T>* tape, const TensorPtr<T>& x, const layers::Conv2d<T>& c1,
                          const layers::BatchNorm2d<T>& b1, const layers::Conv2d<T>& c2,
                          const layers::BatchNorm2d<T>& b2, bool train) const {
    auto h = nn::relu(tape, b1.forward(tape, c1.forward(tape, x), train));
    return nn::relu(tape, b2.forward(tape, c2.forward(tape, h), train));
  }

  static Tensor<T> sinusoidal_table(int64_t length, int64_t embed) {
    Tensor<T> pe({length, embed});
    for (int64_t pos = 0; pos < length; ++pos) {
      for (int64_t i = 0; i < embed; ++i) {
        const double angle = static_cast<double>(pos) /
                             std::pow(10000.0, 2.0 * static_cast<double>(i / 2) /
                                                   static_cast<double>(embed));
        pe.values[pos * embed + i] =
            static_cast<T>((i % 2 == 0) ? std::sin(angle) : std::cos(angle));
      }
    }
    return pe;
  }

  void build(Rng& rng) {
    if (cfg_.use_time) {
      time_conv1_.spec = cfg_.conv_time;
      time_conv1_.init(cfg_.c_in, rng);
      time_bn1_.init(cfg_.c1);
      time_conv2_.spec = cfg_.conv_time;
      time_conv2_.init(cfg_.c1, rng);
      time_bn2_.init(cfg_.c1);
      time_encoder_.spec = cfg_.attn_time;
      time_encoder_.init(cfg_.encoder_depth, rng);
      if (cfg_.positional_encoding) time_pos_ = sinusoidal_table(cfg_.d, cfg_.band_tokens());
    }
    if (cfg_.use_freq) {
      freq_conv1_.spec = cfg_.conv_freq;
      freq_conv1_.init(cfg_.c_in, rng);
      freq_bn1_.init(cfg_.c1);
      freq_conv2_.spec = cfg_.conv_freq;
      freq_conv2_.init(cfg_.c1, rng);
      freq_bn2_.init(cfg_.c1);
      freq_encoder_.spec = cfg_.attn_freq;
      freq_encoder_.init(cfg_.encoder_depth, rng);
      if (cfg_.positional_encoding) freq_pos_ = sinusoidal_table(cfg_.f, cfg_.frame_tokens());
    }
    if (cfg_.use_fusion) {
      fusion_conv1_.spec = cfg_.conv_fusion;
      fusion_conv1_.init(cfg_.c_in, rng);
      fusion_bn1_.init(cfg_.c1);
      fusion_conv2_.spec = cfg_.conv_fusion;
      fusion_conv2_.init(cfg_.c1, rng);
      fusion_bn2_.init(cfg_.c1);
      fusion_encoder_.spec = cfg_.attn_fusion;
      fusion_encoder_.init(cfg_.encoder_depth, rng);
      if (cfg_.use_time) query_proj_.init(cfg_.d, cfg_.frame_tokens(), rng);
      if (cfg_.use_freq) key_proj_.init(cfg_.f, cfg_.band_tokens(), rng);
      if (!cfg_.use_time) query_from_value_.init(cfg_.frame_tokens(), cfg_.frame_tokens(), rng);
      if (!cfg_.use_freq) key_from_value_.init(cfg_.frame_tokens(), cfg_.frame_tokens(), rng);
    }
    classifier_.init(cfg_.classifier_in(), cfg_.n_classes, rng);
  }

  void collect_parameters() {
    params_.clear();
    collect_all();
    std::set<std::string> names;
    for (const auto& p : params_) {
      if (!names.insert(p.name).second) {
        throw ConfigError("duplicate parameter name: " + p.name);
      }
    }
  }

  void collect_all() {
    if (cfg_.use_time) {
      time_conv1_.collect(params_, "time.conv1");
      time_bn1_.collect(params_, "time.bn1");
      time_conv2_.collect(params_, "time.conv2");
      time_bn2_.collect(params_, "time.bn2");
      time_encoder_.collect(params_, "time.encoder");
    }
    if (cfg_.use_freq) {
      freq_conv1_.collect(params_, "freq.conv1");
      freq_bn1_.collect(params_, "freq.bn1");
      freq_conv2_.collect(params_, "freq.conv2");
      freq_bn2_.collect(params_, "freq.bn2");
      freq_encoder_.collect(params_, "freq.encoder");
    }
    if (cfg_.use_fusion) {
      fusion_conv1_.collect(params_, "fusion.conv1");
      fusion_bn1_.collect(params_, "fusion.bn1");
      fusion_conv2_.collect(params_, "fusion.conv2");
      fusion_bn2_.collect(params_, "fusion.bn2");
      fusion_encoder_.collect(params_, "fusion.encoder");
      if (cfg_.use_time) query_proj_.collect(params_, "fusion.query_proj");
      if (cfg_.use_freq) key_proj_.collect(params_, "fusion.key_proj");
      if (!cfg_.use_time) query_from_value_.collect(params_, "fusion.query_from_value");
      if (!cfg_.use_freq) key_from_value_.collect(params_, "fusion.key_from_value");
    }
    classifier_.collect(params_, "classifier");
  }

  ModelConfig cfg_;
  mutable Rng dropout_rng_;

  layers::Conv2d<T> time_conv1_, time_conv2_;
  layers::BatchNorm2d<T> time_bn1_, time_bn2_;
  layers::TransformerEncoder<T> time_encoder_;
  Tensor<T> time_pos_;

  layers::Conv2d<T> freq_conv1_, freq_conv2_;
  layers::BatchNorm2d<T> freq_bn1_, freq_bn2_;
  layers::TransformerEncoder<T> freq_encoder_;
  Tensor<T> freq_pos_;

  layers::Conv2d<T> fusion_conv1_, fusion_conv2_;
  layers::BatchNorm2d<T> fusion_bn1_, fusion_bn2_;
  layers::TransformerEncoder<T> fusion_encoder_;
  layers::Linear<T> query_proj_, key_proj_;
  layers::Linear<T> query_from_value_, key_from_value_;

  layers::Linear<T> classifier_;
  ParameterList<T> params_;
};

}  // namespace tft

#endif  // TFT_MODEL_MODEL_HPP_
