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

#include "vground/core/adam.h"

#include <cmath>
#include <string>

#include "vground/util/error.h"

namespace vground::core {
namespace {

void require_finite(std::span<const float> g, const char* name) {
  for (float v : g) {
    if (!std::isfinite(v)) throw NumericalError(std::string("non-finite gradient in ") + name);
  }
}

}  // namespace

void adam_update(std::span<float> param, std::span<const float> grad, std::span<float> m,
                 std::span<float> v, std::uint64_t step, const AdamConfig& c) {
  const double t = static_cast<double>(step);
  const double correct1 = 1.0 - std::pow(c.beta1, t);
  const double correct2 = 1.0 - std::pow(c.beta2, t);
  for (std::size_t i = 0; i < param.size(); ++i) {
    const double g = grad[i];
    const double mi = c.beta1 * m[i] + (1.0 - c.beta1) * g;
    const double vi = c.beta2 * v[i] + (1.0 - c.beta2) * g * g;
    m[i] = static_cast<float>(mi);
    v[i] = static_cast<float>(vi);
    const double m_hat = mi / correct1;
    const double v_hat = vi / correct2;
    param[i] = static_cast<float>(param[i] - c.lr * m_hat / (std::sqrt(v_hat) + c.epsilon));
  }
}

AdamState AdamState::for_params(const EncoderParams& params, const AdamConfig& config) {
  AdamState s;
  s.config = config;
  params.for_each_tensor([&](const char*, const Tensor& t) {
    s.first_moment.emplace_back(t.shape);
    s.second_moment.emplace_back(t.shape);
  });
  return s;
}

void adam_step(EncoderParams& params, const Gradients& grads, AdamState& state) {
  for (const auto& [id, row] : grads.embedding_rows) {
    if (id >= params.dims.vocab_size) {
      throw DataError("gradient for embedding row " + std::to_string(id) + " beyond vocabulary");
    }
    require_finite(row, "word_embeddings");
  }
  grads.for_each_dense([](const char* name, const Tensor& t) { require_finite(t.values, name); });
  if (state.first_moment.size() != 6) throw DataError("Adam state does not match the parameters");
  const Tensor* dense[] = {&grads.rnn_input_weights, &grads.rnn_recurrent_weights, &grads.rnn_bias,
                           &grads.proj_weights, &grads.proj_bias};
  std::size_t slot = 0;
  params.for_each_tensor([&](const char* name, const Tensor& t) {
    const bool ok = state.first_moment[slot].shape == t.shape &&
                    state.second_moment[slot].shape == t.shape &&
                    (slot == 0 || dense[slot - 1]->shape == t.shape);
    if (!ok) throw DataError(std::string("Adam shape mismatch for ") + name);
    ++slot;
  });

  ++state.step;
  const std::size_t d_w = params.dims.word_dim;
  for (const auto& [id, row] : grads.embedding_rows) {
    const std::size_t off = static_cast<std::size_t>(id) * d_w;
    adam_update(params.word_embeddings.row(id), row,
                std::span<float>(state.first_moment[0].values).subspan(off, d_w),
                std::span<float>(state.second_moment[0].values).subspan(off, d_w), state.step,
                state.config);
  }
  slot = 0;
  params.for_each_tensor([&](const char*, Tensor& t) {
    if (slot > 0) {
      adam_update(t.values, dense[slot - 1]->values, state.first_moment[slot].values,
                  state.second_moment[slot].values, state.step, state.config);
    }
    ++slot;
  });
}

}  // namespace vground::core
