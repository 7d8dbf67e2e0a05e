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

#ifndef TFT_NN_INIT_HPP_
#define TFT_NN_INIT_HPP_

#include <cmath>

#include "tft/rng.hpp"
#include "tft/tensor.hpp"

namespace tft::nn {

// Uniform fan-in initialization: U(-sqrt(1/fan_in), sqrt(1/fan_in)).
template <typename T>
void init_uniform_fanin(Tensor<T>& t, int64_t fan_in, Rng& rng) {
  const double bound = std::sqrt(1.0 / static_cast<double>(fan_in));
  for (T& v : t.values) v = static_cast<T>(rng.uniform(-bound, bound));
}

}  // namespace tft::nn

#endif  // TFT_NN_INIT_HPP_
