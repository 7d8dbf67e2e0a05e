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

#ifndef TFT_AUDIO_SEGMENT_HPP_
#define TFT_AUDIO_SEGMENT_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace tft::audio {

// One fixed-size log-Mel excerpt: the model input unit. `values` is
// band-major, n_mels rows of n_frames columns, stored as the 32-bit floats
// that also live in the on-disk cache.
struct LogMelSegment {
  int64_t n_mels = 0;
  int64_t n_frames = 0;
  std::vector<float> values;
  std::string utterance_id;
  uint32_t segment_index = 0;
  uint16_t label = 0;
};

}  // namespace tft::audio

#endif  // TFT_AUDIO_SEGMENT_HPP_
