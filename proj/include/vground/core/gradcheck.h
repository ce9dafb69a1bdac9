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

#ifndef VGROUND_CORE_GRADCHECK_H_
#define VGROUND_CORE_GRADCHECK_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "vground/core/encoder.h"

namespace vground::core {

// |a - n| / max(|a|, |n|, 1e-6)
double relative_error(double analytic, double numeric);

// Central-difference check of an arbitrary scalar function against a
// supplied analytic gradient. Returns the max relative_error.
double max_relative_error(const std::function<double(std::span<const double>)>& f,
                          std::span<const double> x, std::span<const double> analytic,
                          double epsilon);

struct GradCheckSample {
  std::vector<TokenId> token_ids;
  std::vector<float> target;
  int label = 1;
  double margin = 0.0;
};

struct GradCheckOptions {
  double epsilon = 1e-3;
  // 0 checks every coordinate; otherwise a seeded random subset of this
  // many coordinates (at least 200 are always checked when available).
  std::size_t max_coordinates = 0;
  std::uint64_t seed = 0;
};

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::size_t coordinates = 0;
  std::string worst_tensor;
  std::size_t worst_index = 0;
};

// Compares backpropagated gradients with (L(p + eps) - L(p - eps)) / 2eps
// for the encoder's parameters. Both sides are evaluated by the double
// instantiation of the encoder, starting from the float parameters, so
// that single-precision rounding does not swamp the differences.
// Word-embedding rows are checked only for tokens in the sample.
GradCheckResult grad_check(const EncoderParams& params, const GradCheckSample& sample,
                           const GradCheckOptions& options = {});

// A random encoder configuration for property-style checks: the given
// dims, a sequence length drawn from [3, 8], random nonzero biases and a
// random target. Label alternates with the seed's parity; negatives use
// margin -0.5 so the hinge is active.
struct GradCheckCase {
  EncoderParams params;
  GradCheckSample sample;
};
GradCheckCase random_gradcheck_case(std::uint64_t seed, CellType cell, std::size_t vocab = 50,
                                    std::size_t word_dim = 16, std::size_t hidden = 32,
                                    std::size_t output = 64);

}  // namespace vground::core

#endif  // VGROUND_CORE_GRADCHECK_H_
