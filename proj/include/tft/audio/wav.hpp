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

#ifndef TFT_AUDIO_WAV_HPP_
#define TFT_AUDIO_WAV_HPP_

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "tft/common.hpp"
#include "tft/io/binary.hpp"

namespace tft::audio {

// Mono PCM amplitudes in [-1, 1] at a fixed sample rate.
struct Waveform {
  std::vector<double> samples;
  int sample_rate_hz = 16000;

  void validate() const {
    if (samples.empty()) throw InputError("waveform is empty");
    if (sample_rate_hz <= 0) throw InputError("waveform sample rate must be positive");
    for (double s : samples) {
      if (!std::isfinite(s)) throw InputError("waveform contains non-finite samples");
    }
  }
};

// Reads a RIFF/WAVE file containing 16-bit PCM. Multi-channel audio is
// averaged down to mono; when that happens a note is appended to *warning.
inline Waveform read_wav(const std::string& path, std::string* warning = nullptr) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InputError("cannot open audio file: " + path);

  io::expect_magic(is, "RIFF", "wav header");
  (void)io::get_u32(is, "wav riff size");
  io::expect_magic(is, "WAVE", "wav header");

  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t sample_rate = 0;
  bool have_fmt = false;
  std::vector<char> data;

  while (true) {
    char id[4];
    is.read(id, 4);
    if (is.gcount() == 0) break;  // clean end of chunks
    if (is.gcount() != 4) throw FormatError("truncated chunk id in " + path);
    const uint32_t size = io::get_u32(is, "wav chunk size");
    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (size < 16) throw FormatError("fmt chunk too small in " + path);
      format = io::get_u16(is, "wav format");
      channels = io::get_u16(is, "wav channels");
      sample_rate = io::get_u32(is, "wav sample rate");
      (void)io::get_u32(is, "wav byte rate");
      (void)io::get_u16(is, "wav block align");
      bits = io::get_u16(is, "wav bits per sample");
      if (size > 16) is.seekg(size - 16, std::ios::cur);
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      data.resize(size);
      io::get_bytes(is, data.data(), size, "wav data chunk");
    } else {
      is.seekg(size + (size & 1), std::ios::cur);  // chunks are word-aligned
    }
    if (!is) throw FormatError("truncated chunk in " + path);
  }

  if (!have_fmt) throw FormatError("missing fmt chunk in " + path);
  if (data.empty()) throw FormatError("missing or empty data chunk in " + path);
  if (format != 1 || bits != 16) {
    throw FormatError("unsupported wav encoding in " + path + " (need 16-bit PCM)");
  }
  if (channels < 1) throw FormatError("wav has zero channels: " + path);

  const size_t n_values = data.size() / 2;
  const size_t n_frames = n_values / channels;
  if (n_frames == 0) throw FormatError("wav data shorter than one frame: " + path);
  if (channels > 1 && warning) {
    *warning += path + ": " + std::to_string(channels) + " channels averaged to mono";
  }

  Waveform w;
  w.sample_rate_hz = static_cast<int>(sample_rate);
  w.samples.resize(n_frames);
  const auto* raw = reinterpret_cast<const unsigned char*>(data.data());
  for (size_t i = 0; i < n_frames; ++i) {
    double acc = 0;
    for (size_t ch = 0; ch < channels; ++ch) {
      const size_t o = 2 * (i * channels + ch);
      const auto v = static_cast<int16_t>(static_cast<uint16_t>(raw[o]) |
                                          (static_cast<uint16_t>(raw[o + 1]) << 8));
      acc += static_cast<double>(v) / 32768.0;
    }
    w.samples[i] = acc / static_cast<double>(channels);
  }
  w.validate();
  return w;
}

}  // namespace tft::audio

#endif  // TFT_AUDIO_WAV_HPP_
