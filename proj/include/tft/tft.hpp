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

#ifndef TFT_TFT_HPP_
#define TFT_TFT_HPP_

#include "tft/audio/cache.hpp"
#include "tft/audio/features.hpp"
#include "tft/audio/fft.hpp"
#include "tft/audio/segment.hpp"
#include "tft/audio/wav.hpp"
#include "tft/autodiff.hpp"
#include "tft/common.hpp"
#include "tft/eval/folds.hpp"
#include "tft/eval/manifest.hpp"
#include "tft/eval/metrics.hpp"
#include "tft/eval/protocol.hpp"
#include "tft/eval/report.hpp"
#include "tft/io/binary.hpp"
#include "tft/io/run_config.hpp"
#include "tft/model/checkpoint.hpp"
#include "tft/model/config.hpp"
#include "tft/model/model.hpp"
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
#include "tft/train/trainer.hpp"

#endif  // TFT_TFT_HPP_
