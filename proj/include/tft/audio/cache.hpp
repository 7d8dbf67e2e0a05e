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

#ifndef TFT_AUDIO_CACHE_HPP_
#define TFT_AUDIO_CACHE_HPP_

#include <fstream>
#include <string>
#include <vector>

#include "tft/audio/segment.hpp"
#include "tft/common.hpp"
#include "tft/io/binary.hpp"

namespace tft::audio {

// Feature cache: "TFTF" magic, u16 format version, u32 segment count, then
// per segment a header (length-prefixed utterance id, u32 segment index,
// u16 label, u16 f, u16 d) followed by f*d little-endian f32 values in
// band-major order. Round trips are bit-exact.

inline constexpr char kCacheMagic[4] = {'T', 'F', 'T', 'F'};
inline constexpr uint16_t kCacheVersion = 1;

inline void write_feature_cache(const std::vector<LogMelSegment>& segments,
                                const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw InputError("cannot open cache file for writing: " + path);
  io::put_bytes(os, kCacheMagic, 4);
  io::put_u16(os, kCacheVersion);
  io::put_u32(os, static_cast<uint32_t>(segments.size()));
  for (const auto& s : segments) {
    if (s.n_mels <= 0 || s.n_frames <= 0 || s.n_mels > 0xffff || s.n_frames > 0xffff) {
      throw InputError("segment dims out of range for cache format");
    }
    if (static_cast<int64_t>(s.values.size()) != s.n_mels * s.n_frames) {
      throw InputError("segment value count does not match dims");
    }
    io::put_string(os, s.utterance_id);
    io::put_u32(os, s.segment_index);
    io::put_u16(os, s.label);
    io::put_u16(os, static_cast<uint16_t>(s.n_mels));
    io::put_u16(os, static_cast<uint16_t>(s.n_frames));
    io::put_f32_array(os, s.values.data(), s.values.size());
  }
  if (!os) throw InputError("failed writing cache file: " + path);
}

inline std::vector<LogMelSegment> read_feature_cache(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InputError("cannot open cache file: " + path);
  io::expect_magic(is, kCacheMagic, "feature cache");
  const uint16_t version = io::get_u16(is, "cache version");
  if (version != kCacheVersion) {
    throw FormatError("unsupported cache version " + std::to_string(version) + " in " + path);
  }
  const uint32_t count = io::get_u32(is, "cache segment count");
  std::vector<LogMelSegment> segments;
  segments.reserve(count);
  for (uint32_t i = 0; i < count; ++i) {
    LogMelSegment s;
    s.utterance_id = io::get_string(is, "cache utterance id");
    s.segment_index = io::get_u32(is, "cache segment index");
    s.label = io::get_u16(is, "cache label");
    s.n_mels = io::get_u16(is, "cache mel count");
    s.n_frames = io::get_u16(is, "cache frame count");
    if (s.n_mels == 0 || s.n_frames == 0) {
      throw FormatError("zero segment dims in cache " + path);
    }
    s.values.resize(static_cast<size_t>(s.n_mels * s.n_frames));
    io::get_f32_array(is, s.values.data(), s.values.size(), "cache payload");
    segments.push_back(std::move(s));
  }
  return segments;
}

}  // namespace tft::audio

#endif  // TFT_AUDIO_CACHE_HPP_
