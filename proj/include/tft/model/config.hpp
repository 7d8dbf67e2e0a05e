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

#ifndef TFT_MODEL_CONFIG_HPP_
#define TFT_MODEL_CONFIG_HPP_

#include <string>

#include "tft/common.hpp"
#include "tft/nn/attention.hpp"
#include "tft/nn/conv.hpp"

namespace tft {

// Architecture hyperparameters. Defaults follow the reference setting:
// 80-band, 80-frame inputs, two stride-2 reductions per branch, and three
// transformer encoders of embed dim 20 (heads 2/2/4, feed-forward
// 512/512/1024).
struct ModelConfig {
  int64_t f = 80;      // mel bands
  int64_t d = 80;      // frames per segment
  int64_t c_in = 1;    // input channels
  int64_t c1 = 64;     // conv output channels
  int64_t n_classes = 4;

  nn::ConvSpec conv_time{64, 5, 1, 2, 1, 2, 0};    // halves the band axis
  nn::ConvSpec conv_freq{64, 1, 5, 1, 2, 0, 2};    // halves the frame axis
  nn::ConvSpec conv_fusion{64, 5, 5, 2, 2, 2, 2};  // halves both axes

  nn::AttentionSpec attn_time{20, 2, 512};
  nn::AttentionSpec attn_freq{20, 2, 512};
  nn::AttentionSpec attn_fusion{20, 4, 1024};

  // Branch toggles; exactly the sets {T,F}, {T,TF}, {F,TF}, {T,F,TF} are valid.
  bool use_time = true;
  bool use_freq = true;
  bool use_fusion = true;

  int64_t encoder_depth = 1;
  double dropout = 0.0;
  bool positional_encoding = false;

  int64_t band_tokens() const { return f / 4; }   // sequence length after band reduction
  int64_t frame_tokens() const { return d / 4; }  // sequence length after frame reduction

  // Width of the classifier input: pooled fusion output, or the two
  // mean-pooled branch encodings when the fusion module is disabled.
  int64_t classifier_in() const {
    return use_fusion ? 2 * frame_tokens() : band_tokens() + frame_tokens();
  }

  void validate() const {
    if (f < 4 || d < 4 || f % 4 != 0 || d % 4 != 0) {
      throw ConfigError("model: f and d must be multiples of 4 (got f=" + std::to_string(f) +
                        ", d=" + std::to_string(d) + ")");
    }
    if (c_in < 1 || c1 < 1) throw ConfigError("model: channel counts must be positive");
    if (n_classes < 2) throw ConfigError("model: need at least 2 classes");
    if (encoder_depth < 1) throw ConfigError("model: encoder depth must be >= 1");
    if (dropout < 0.0 || dropout >= 1.0) throw ConfigError("model: dropout must be in [0, 1)");
    conv_time.validate();
    conv_freq.validate();
    conv_fusion.validate();
    if (conv_time.out_channels != c1 || conv_freq.out_channels != c1 ||
        conv_fusion.out_channels != c1) {
      throw ConfigError("model: conv out_channels must equal c1");
    }
    attn_time.validate();
    attn_freq.validate();
    attn_fusion.validate();
    if (attn_time.embed_dim != band_tokens()) {
      throw ConfigError("model: time encoder embed dim must equal f/4");
    }
    if (attn_freq.embed_dim != frame_tokens() || attn_fusion.embed_dim != frame_tokens()) {
      throw ConfigError("model: frequency/fusion encoder embed dim must equal d/4");
    }
    const int enabled = (use_time ? 1 : 0) + (use_freq ? 1 : 0) + (use_fusion ? 1 : 0);
    if (enabled < 2) {
      throw ConfigError("model: at least two of the three modules must be enabled");
    }
  }

  // Scales the architecture to new input dims, keeping head counts and
  // derived embed dims consistent. Used by reduced test configurations.
  ModelConfig with_dims(int64_t new_f, int64_t new_d, int64_t new_c1) const {
    ModelConfig c = *this;
    c.f = new_f;
    c.d = new_d;
    c.c1 = new_c1;
    c.conv_time.out_channels = new_c1;
    c.conv_freq.out_channels = new_c1;
    c.conv_fusion.out_channels = new_c1;
    c.attn_time.embed_dim = new_f / 4;
    c.attn_freq.embed_dim = new_d / 4;
    c.attn_fusion.embed_dim = new_d / 4;
    return c;
  }

  std::string architecture_name() const {
    std::string name;
    if (use_time) name += "T";
    if (use_freq) name += name.empty() ? "F" : "+F";
    if (use_fusion) name += name.empty() ? "TF" : "+TF";
    return name;
  }
};

}  // namespace tft

#endif  // TFT_MODEL_CONFIG_HPP_
