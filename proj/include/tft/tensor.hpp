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

#ifndef TFT_TENSOR_HPP_
#define TFT_TENSOR_HPP_

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tft/common.hpp"

namespace tft {

using Shape = std::vector<int64_t>;

inline int64_t shape_numel(const Shape& s) {
  int64_t n = 1;
  for (int64_t d : s) n *= d;
  return n;
}

inline std::string shape_to_string(const Shape& s) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
  os << ")";
  return os.str();
}

// Dense n-dimensional array in row-major order with an optional gradient
// buffer of equal length. `grad` stays empty until a differentiable op (or
// ensure_grad) touches the tensor.
template <typename T>
struct Tensor {
  Shape shape;
  std::vector<T> values;
  std::vector<T> grad;

  Tensor() = default;
  explicit Tensor(Shape s, T fill = T(0))
      : shape(std::move(s)), values(static_cast<size_t>(shape_numel(shape)), fill) {
    for (int64_t d : shape) {
      if (d <= 0) throw ShapeError("tensor dimensions must be positive, got " + shape_to_string(shape));
    }
  }
  Tensor(Shape s, std::vector<T> data) : shape(std::move(s)), values(std::move(data)) {
    if (static_cast<int64_t>(values.size()) != shape_numel(shape)) {
      throw ShapeError("tensor data length " + std::to_string(values.size()) +
                       " does not match shape " + shape_to_string(shape));
    }
  }

  int64_t numel() const { return static_cast<int64_t>(values.size()); }
  int ndim() const { return static_cast<int>(shape.size()); }
  int64_t dim(int i) const { return shape[static_cast<size_t>(i)]; }

  T* data() { return values.data(); }
  const T* data() const { return values.data(); }

  bool same_shape(const Tensor& other) const { return shape == other.shape; }

  bool has_grad() const { return !grad.empty(); }
  void ensure_grad() {
    if (grad.size() != values.size()) grad.assign(values.size(), T(0));
  }
  void zero_grad() {
    if (!grad.empty()) std::fill(grad.begin(), grad.end(), T(0));
  }

  T& at(std::initializer_list<int64_t> idx) { return values[flat_index(idx)]; }
  const T& at(std::initializer_list<int64_t> idx) const { return values[flat_index(idx)]; }

  size_t flat_index(std::initializer_list<int64_t> idx) const {
    int64_t flat = 0;
    size_t k = 0;
    for (int64_t i : idx) {
      flat = flat * shape[k] + i;
      ++k;
    }
    return static_cast<size_t>(flat);
  }

  bool all_finite() const {
    for (const T& v : values) {
      if (!std::isfinite(static_cast<double>(v))) return false;
    }
    return true;
  }

  void check_finite(const char* context) const {
    if (!all_finite()) throw NumericError(std::string("non-finite value in ") + context);
  }
};

template <typename T>
using TensorPtr = std::shared_ptr<Tensor<T>>;

template <typename T>
TensorPtr<T> make_tensor(Shape shape, T fill = T(0)) {
  return std::make_shared<Tensor<T>>(std::move(shape), fill);
}

template <typename T>
TensorPtr<T> make_tensor(Shape shape, std::vector<T> data) {
  return std::make_shared<Tensor<T>>(std::move(shape), std::move(data));
}

// ---------------------------------------------------------------------------
// Flat matrix kernels over row-major buffers. All accumulate into C (callers
// zero C when needed). Backed by Eigen's GEMM; everything above this layer is
// hand-written.
// ---------------------------------------------------------------------------

namespace detail {
template <typename T>
using RowMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MatMap = Eigen::Map<RowMat<T>>;
template <typename T>
using ConstMatMap = Eigen::Map<const RowMat<T>>;
}  // namespace detail

// C[M,N] += A[M,K] * B[K,N]
template <typename T>
void gemm_nn_acc(const T* a, const T* b, T* c, int64_t m, int64_t k, int64_t n) {
  detail::MatMap<T>(c, m, n).noalias() +=
      detail::ConstMatMap<T>(a, m, k) * detail::ConstMatMap<T>(b, k, n);
}

// C[M,N] += A[K,M]^T * B[K,N]
template <typename T>
void gemm_tn_acc(const T* a, const T* b, T* c, int64_t m, int64_t k, int64_t n) {
  detail::MatMap<T>(c, m, n).noalias() +=
      detail::ConstMatMap<T>(a, k, m).transpose() * detail::ConstMatMap<T>(b, k, n);
}

// C[M,N] += A[M,K] * B[N,K]^T
template <typename T>
void gemm_nt_acc(const T* a, const T* b, T* c, int64_t m, int64_t k, int64_t n) {
  detail::MatMap<T>(c, m, n).noalias() +=
      detail::ConstMatMap<T>(a, m, k) * detail::ConstMatMap<T>(b, n, k).transpose();
}

// Dot product of two contiguous vectors. Four fixed accumulation chains:
// the summation order depends only on the index, never on buffer alignment,
// so results are bit-reproducible across allocations and runs.
template <typename T>
T dot(const T* x, const T* y, int64_t n) {
  T s0 = 0, s1 = 0, s2 = 0, s3 = 0;
  int64_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += x[i] * y[i];
    s1 += x[i + 1] * y[i + 1];
    s2 += x[i + 2] * y[i + 2];
    s3 += x[i + 3] * y[i + 3];
  }
  for (; i < n; ++i) s0 += x[i] * y[i];
  return (s0 + s1) + (s2 + s3);
}

// Fixed-order sum and squared-deviation sum with double accumulators.
template <typename T>
double stable_sum(const T* x, int64_t n) {
  double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
  int64_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += static_cast<double>(x[i]);
    s1 += static_cast<double>(x[i + 1]);
    s2 += static_cast<double>(x[i + 2]);
    s3 += static_cast<double>(x[i + 3]);
  }
  for (; i < n; ++i) s0 += static_cast<double>(x[i]);
  return (s0 + s1) + (s2 + s3);
}

template <typename T>
double stable_sq_dev_sum(const T* x, int64_t n, double mean) {
  double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
  int64_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const double d0 = static_cast<double>(x[i]) - mean;
    const double d1 = static_cast<double>(x[i + 1]) - mean;
    const double d2 = static_cast<double>(x[i + 2]) - mean;
    const double d3 = static_cast<double>(x[i + 3]) - mean;
    s0 += d0 * d0;
    s1 += d1 * d1;
    s2 += d2 * d2;
    s3 += d3 * d3;
  }
  for (; i < n; ++i) {
    const double d = static_cast<double>(x[i]) - mean;
    s0 += d * d;
  }
  return (s0 + s1) + (s2 + s3);
}

// Fixed-order dot with double accumulation, for gradient reductions.
template <typename T>
double stable_dot(const T* x, const T* y, int64_t n) {
  double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
  int64_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += static_cast<double>(x[i]) * static_cast<double>(y[i]);
    s1 += static_cast<double>(x[i + 1]) * static_cast<double>(y[i + 1]);
    s2 += static_cast<double>(x[i + 2]) * static_cast<double>(y[i + 2]);
    s3 += static_cast<double>(x[i + 3]) * static_cast<double>(y[i + 3]);
  }
  for (; i < n; ++i) s0 += static_cast<double>(x[i]) * static_cast<double>(y[i]);
  return (s0 + s1) + (s2 + s3);
}

}  // namespace tft

#endif  // TFT_TENSOR_HPP_
