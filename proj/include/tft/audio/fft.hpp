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

#ifndef TFT_AUDIO_FFT_HPP_
#define TFT_AUDIO_FFT_HPP_

#include <cmath>
#include <utility>
#include <vector>

#include "tft/common.hpp"

namespace tft::audio {

inline constexpr double kPi = 3.14159265358979323846;

// In-place iterative radix-2 complex FFT (decimation in time). Twiddles come
// straight from cos/sin per butterfly to keep rounding error near machine
// precision for the small transform sizes used here.
inline void fft_radix2(std::vector<double>& re, std::vector<double>& im) {
  const size_t n = re.size();
  if (n != im.size()) throw InputError("fft: re/im length mismatch");
  if (n == 0 || (n & (n - 1)) != 0) throw ConfigError("fft: size must be a power of two");

  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) {
      std::swap(re[i], re[j]);
      std::swap(im[i], im[j]);
    }
  }

  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * kPi / static_cast<double>(len);
    for (size_t i = 0; i < n; i += len) {
      for (size_t j = 0; j < len / 2; ++j) {
        const double wr = std::cos(ang * static_cast<double>(j));
        const double wi = std::sin(ang * static_cast<double>(j));
        const size_t a = i + j;
        const size_t b = i + j + len / 2;
        const double tr = re[b] * wr - im[b] * wi;
        const double ti = re[b] * wi + im[b] * wr;
        re[b] = re[a] - tr;
        im[b] = im[a] - ti;
        re[a] += tr;
        im[a] += ti;
      }
    }
  }
}

}  // namespace tft::audio

#endif  // TFT_AUDIO_FFT_HPP_
