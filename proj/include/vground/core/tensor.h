// Copyright 2026 The vground Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VGROUND_CORE_TENSOR_H_
#define VGROUND_CORE_TENSOR_H_

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

namespace vground::core {

// Dense row-major tensor of rank 1 or 2.
template <typename T>
struct BasicTensor {
  std::vector<std::size_t> shape;
  std::vector<T> values;

  BasicTensor() = default;
  explicit BasicTensor(std::vector<std::size_t> s, T fill = T(0))
      : shape(std::move(s)),
        values(std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>()),
               fill) {}

  std::size_t rows() const { return shape.empty() ? 0 : shape[0]; }
  std::size_t cols() const { return shape.size() < 2 ? 1 : shape[1]; }
  std::size_t size() const { return values.size(); }

  T& operator()(std::size_t r, std::size_t c) { return values[r * cols() + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return values[r * cols() + c]; }
  T& operator[](std::size_t i) { return values[i]; }
  const T& operator[](std::size_t i) const { return values[i]; }

  std::span<T> row(std::size_t r) { return {values.data() + r * cols(), cols()}; }
  std::span<const T> row(std::size_t r) const { return {values.data() + r * cols(), cols()}; }

  void zero() { std::fill(values.begin(), values.end(), T(0)); }

  template <typename U>
  BasicTensor<U> cast() const {
    BasicTensor<U> out;
    out.shape = shape;
    out.values.assign(values.begin(), values.end());
    return out;
  }

  friend bool operator==(const BasicTensor&, const BasicTensor&) = default;
};

using Tensor = BasicTensor<float>;

}  // namespace vground::core

#endif  // VGROUND_CORE_TENSOR_H_
