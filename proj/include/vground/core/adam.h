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

#ifndef VGROUND_CORE_ADAM_H_
#define VGROUND_CORE_ADAM_H_

#include <cstdint>
#include <span>
#include <vector>

#include "vground/core/encoder.h"
#include "vground/core/tensor.h"

namespace vground::core {

struct AdamConfig {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// One bias-corrected Adam update of `param` in place. `step` is the
// 1-based step count used for bias correction.
void adam_update(std::span<float> param, std::span<const float> grad, std::span<float> m,
                 std::span<float> v, std::uint64_t step, const AdamConfig& config);

// Moment accumulators for every tensor of an EncoderParams, in
// for_each_tensor order.
struct AdamState {
  AdamConfig config;
  std::uint64_t step = 0;
  std::vector<Tensor> first_moment;
  std::vector<Tensor> second_moment;

  static AdamState for_params(const EncoderParams& params, const AdamConfig& config);
};

// Increments state.step and applies Adam to every dense tensor. Only the
// word-embedding rows present in grads (and their moments) are touched.
// Throws NumericalError, before modifying anything, if a gradient is not
// finite.
void adam_step(EncoderParams& params, const Gradients& grads, AdamState& state);

}  // namespace vground::core

#endif  // VGROUND_CORE_ADAM_H_
