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

#ifndef VGROUND_CORE_COSINE_H_
#define VGROUND_CORE_COSINE_H_

#include <algorithm>
#include <cmath>
#include <span>
#include <string>

#include "vground/util/error.h"

namespace vground::core {

namespace internal {

struct CosineTerms {
  double dot = 0.0;
  double norm_a = 0.0;
  double norm_b = 0.0;
};

template <typename A, typename B>
CosineTerms cosine_terms(std::span<const A> a, std::span<const B> b) {
  if (a.size() != b.size()) {
    throw DataError("cosine of vectors with different lengths (" + std::to_string(a.size()) +
                    " vs " + std::to_string(b.size()) + ")");
  }
  double dot = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = a[i];
    const double y = b[i];
    dot += x * y;
    aa += x * x;
    bb += y * y;
  }
  if (aa == 0.0 || bb == 0.0) throw DataError("cosine of a zero-norm vector");
  return {dot, std::sqrt(aa), std::sqrt(bb)};
}

inline void check_loss_args(int y, double margin) {
  if (y != 1 && y != -1) throw DataError("loss label must be +1 or -1");
  if (!(margin >= -1.0 && margin <= 1.0)) throw DataError("loss margin must lie in [-1, 1]");
}

}  // namespace internal

// a.b / (|a||b|), accumulated in double in index order and clamped to
// [-1, 1]. Throws DataError for zero-norm inputs or length mismatch.
template <typename A, typename B>
double cosine_similarity(std::span<const A> a, std::span<const B> b) {
  const auto t = internal::cosine_terms(a, b);
  return std::clamp(t.dot / (t.norm_a * t.norm_b), -1.0, 1.0);
}

// y = +1: 1 - cos(x1, x2); y = -1: max(0, cos(x1, x2) - margin).
template <typename A, typename B>
double cosine_embedding_loss(std::span<const A> x1, std::span<const B> x2, int y, double margin) {
  internal::check_loss_args(y, margin);
  const double c = cosine_similarity(x1, x2);
  return y == 1 ? 1.0 - c : std::max(0.0, c - margin);
}

// Loss as above plus its gradient with respect to x (target is constant),
// written to grad. The hinge counts as inactive when cos == margin.
template <typename T, typename B>
double cosine_embedding_loss_grad(std::span<const T> x, std::span<const B> target, int y,
                                  double margin, std::span<T> grad) {
  internal::check_loss_args(y, margin);
  const auto t = internal::cosine_terms(x, target);
  const double raw = t.dot / (t.norm_a * t.norm_b);
  const double c = std::clamp(raw, -1.0, 1.0);
  double sign = 0.0;
  double loss = 0.0;
  if (y == 1) {
    sign = -1.0;
    loss = 1.0 - c;
  } else if (c > margin) {
    sign = 1.0;
    loss = c - margin;
  }
  // d cos / dx = target / (|x||t|) - cos * x / |x|^2
  const double inv = 1.0 / (t.norm_a * t.norm_b);
  const double self = raw / (t.norm_a * t.norm_a);
  for (std::size_t i = 0; i < x.size(); ++i) {
    grad[i] = static_cast<T>(sign * (static_cast<double>(target[i]) * inv -
                                     self * static_cast<double>(x[i])));
  }
  return loss;
}

}  // namespace vground::core

#endif  // VGROUND_CORE_COSINE_H_
