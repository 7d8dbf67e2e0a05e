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

#ifndef TFT_AUTODIFF_HPP_
#define TFT_AUTODIFF_HPP_

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "tft/tensor.hpp"

namespace tft {

// Reverse-mode differentiation tape. Each op runs its forward pass eagerly
// and records a closure that propagates output gradients to input gradients.
// backward() replays the closures in reverse order. A null Tape* passed to an
// op means inference only: no closure, no gradient buffers.
template <typename T>
class Tape {
 public:
  void record(std::function<void()> fn) { ops_.push_back(std::move(fn)); }

  void backward() {
    for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) (*it)();
  }

  void clear() { ops_.clear(); }
  size_t size() const { return ops_.size(); }

 private:
  std::vector<std::function<void()>> ops_;
};

// A named model tensor. Gradient buffers exist only on trainable parameters;
// non-trainable entries are state buffers (e.g. batch-norm running stats).
template <typename T>
struct Parameter {
  TensorPtr<T> tensor;
  std::string name;
  bool trainable = true;
};

template <typename T>
using ParameterList = std::vector<Parameter<T>>;

}  // namespace tft

#endif  // TFT_AUTODIFF_HPP_
