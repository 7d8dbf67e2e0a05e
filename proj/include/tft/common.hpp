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

#ifndef TFT_COMMON_HPP_
#define TFT_COMMON_HPP_

#include <stdexcept>
#include <string>

namespace tft {

// Error taxonomy. Callers that want a single catch-all can catch tft::Error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad caller-supplied data (empty waveform, invalid one-hot, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

// Tensor dimension mismatch.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration value or combination.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed on-disk data (cache, checkpoint, manifest, config file).
class FormatError : public Error {
 public:
  using Error::Error;
};

// NaN/Inf encountered where finite values are required.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Extra finite-value checks after every op. Default: on for debug builds.
#ifndef TFT_DEBUG_CHECKS
#ifdef NDEBUG
#define TFT_DEBUG_CHECKS 0
#else
#define TFT_DEBUG_CHECKS 1
#endif
#endif

}  // namespace tft

#endif  // TFT_COMMON_HPP_
