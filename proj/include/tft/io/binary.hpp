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

#ifndef TFT_IO_BINARY_HPP_
#define TFT_IO_BINARY_HPP_

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "tft/common.hpp"

namespace tft::io {

// Little-endian primitives for the binary file formats. Reads throw
// FormatError on truncation so corrupt files surface as format errors.

inline void put_bytes(std::ostream& os, const void* p, size_t n) {
  os.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

inline void get_bytes(std::istream& is, void* p, size_t n, const char* what) {
  is.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
  if (static_cast<size_t>(is.gcount()) != n) {
    throw FormatError(std::string("truncated file while reading ") + what);
  }
}

template <typename U>
void put_le(std::ostream& os, U v) {
  static_assert(std::is_unsigned_v<U>);
  unsigned char buf[sizeof(U)];
  for (size_t i = 0; i < sizeof(U); ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
  put_bytes(os, buf, sizeof(U));
}

template <typename U>
U get_le(std::istream& is, const char* what) {
  static_assert(std::is_unsigned_v<U>);
  unsigned char buf[sizeof(U)];
  get_bytes(is, buf, sizeof(U), what);
  U v = 0;
  for (size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(buf[i]) << (8 * i);
  return v;
}

inline void put_u16(std::ostream& os, uint16_t v) { put_le<uint16_t>(os, v); }
inline void put_u32(std::ostream& os, uint32_t v) { put_le<uint32_t>(os, v); }
inline void put_u64(std::ostream& os, uint64_t v) { put_le<uint64_t>(os, v); }
inline uint16_t get_u16(std::istream& is, const char* what) { return get_le<uint16_t>(is, what); }
inline uint32_t get_u32(std::istream& is, const char* what) { return get_le<uint32_t>(is, what); }
inline uint64_t get_u64(std::istream& is, const char* what) { return get_le<uint64_t>(is, what); }

inline void put_f32(std::ostream& os, float v) { put_u32(os, std::bit_cast<uint32_t>(v)); }
inline float get_f32(std::istream& is, const char* what) {
  return std::bit_cast<float>(get_u32(is, what));
}

inline void put_f32_array(std::ostream& os, const float* v, size_t n) {
  if constexpr (std::endian::native == std::endian::little) {
    put_bytes(os, v, n * sizeof(float));
  } else {
    for (size_t i = 0; i < n; ++i) put_f32(os, v[i]);
  }
}

inline void get_f32_array(std::istream& is, float* v, size_t n, const char* what) {
  if constexpr (std::endian::native == std::endian::little) {
    get_bytes(is, v, n * sizeof(float), what);
  } else {
    for (size_t i = 0; i < n; ++i) v[i] = get_f32(is, what);
  }
}

inline void put_string(std::ostream& os, const std::string& s) {
  if (s.size() > 0xffff) throw InputError("string too long for u16 length prefix");
  put_u16(os, static_cast<uint16_t>(s.size()));
  put_bytes(os, s.data(), s.size());
}

inline std::string get_string(std::istream& is, const char* what) {
  const uint16_t n = get_u16(is, what);
  std::string s(n, '\0');
  if (n > 0) get_bytes(is, s.data(), n, what);
  return s;
}

inline void expect_magic(std::istream& is, const char magic[4], const char* what) {
  char buf[4];
  get_bytes(is, buf, 4, what);
  if (std::memcmp(buf, magic, 4) != 0) {
    throw FormatError(std::string("bad magic bytes in ") + what);
  }
}

}  // namespace tft::io

#endif  // TFT_IO_BINARY_HPP_
