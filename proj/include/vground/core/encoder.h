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

#ifndef VGROUND_CORE_ENCODER_H_
#define VGROUND_CORE_ENCODER_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vground/core/tensor.h"
#include "vground/dataset/vocabulary.h"

namespace vground::core {

using dataset::TokenId;

// Elman: h' = tanh(W x + U h + b).
// Gated (GRU-style, gate rows ordered z, r, n):
//   z = sigmoid(W_z x + U_z h + b_z)
//   r = sigmoid(W_r x + U_r h + b_r)
//   n = tanh(W_n x + b_n + r * (U_n h))
//   h' = (1 - z) * n + z * h
enum class CellType { kElman, kGated };

const char* to_string(CellType cell);
CellType parse_cell_type(std::string_view text);
inline std::size_t gate_count(CellType cell) { return cell == CellType::kElman ? 1 : 3; }

struct EncoderDims {
  std::size_t vocab_size = 0;  // V, trained embedding rows
  std::size_t word_dim = 0;    // d_w
  std::size_t hidden_dim = 0;  // h
  std::size_t output_dim = 0;  // D, equals the feature dim
  CellType cell = CellType::kElman;

  friend bool operator==(const EncoderDims&, const EncoderDims&) = default;
};

// Language encoder: embedding lookup -> recurrent cell -> affine
// projection of the last hidden state. Recurrent tensors have
// gate_count(cell) * h rows.
template <typename T>
struct BasicEncoderParams {
  EncoderDims dims;
  // Seeds the frozen embeddings of ids >= vocab_size (hashed unknowns).
  std::uint64_t oov_seed = 0;
  BasicTensor<T> word_embeddings;        // V x d_w
  BasicTensor<T> rnn_input_weights;      // gh x d_w
  BasicTensor<T> rnn_recurrent_weights;  // gh x h
  BasicTensor<T> rnn_bias;               // gh
  BasicTensor<T> proj_weights;           // D x h
  BasicTensor<T> proj_bias;              // D

  // Visits tensors in serialization order.
  template <typename F>
  void for_each_tensor(F&& f) {
    visit(*this, f);
  }
  template <typename F>
  void for_each_tensor(F&& f) const {
    visit(*this, f);
  }

  template <typename U>
  BasicEncoderParams<U> cast() const {
    BasicEncoderParams<U> out;
    out.dims = dims;
    out.oov_seed = oov_seed;
    out.word_embeddings = word_embeddings.template cast<U>();
    out.rnn_input_weights = rnn_input_weights.template cast<U>();
    out.rnn_recurrent_weights = rnn_recurrent_weights.template cast<U>();
    out.rnn_bias = rnn_bias.template cast<U>();
    out.proj_weights = proj_weights.template cast<U>();
    out.proj_bias = proj_bias.template cast<U>();
    return out;
  }

  friend bool operator==(const BasicEncoderParams&, const BasicEncoderParams&) = default;

 private:
  template <typename Self, typename F>
  static void visit(Self& self, F& f) {
    f("word_embeddings", self.word_embeddings);
    f("rnn_input_weights", self.rnn_input_weights);
    f("rnn_recurrent_weights", self.rnn_recurrent_weights);
    f("rnn_bias", self.rnn_bias);
    f("proj_weights", self.proj_weights);
    f("proj_bias", self.proj_bias);
  }
};

using EncoderParams = BasicEncoderParams<float>;

// Expected shape of each named tensor for `dims`.
std::vector<std::size_t> tensor_shape(const EncoderDims& dims, std::string_view name);

// Uniform(-a, a) with a = 1/sqrt(columns) for every matrix, zero biases.
// Throws ConfigError when any dim is 0.
EncoderParams init_params(const EncoderDims& dims, std::uint64_t seed);

// Frozen embedding used for ids >= vocab_size.
std::vector<float> oov_embedding(std::uint64_t oov_seed, TokenId id, std::size_t word_dim);

// Everything the backward pass needs.
template <typename T>
struct BasicForwardCache {
  std::vector<TokenId> token_ids;
  std::vector<std::vector<T>> inputs;  // x_1..x_T
  std::vector<std::vector<T>> hidden;  // h_0..h_T, h_0 = 0
  // Gated cell only: per step z | r | n | U_n h_{t-1}, each h long.
  std::vector<std::vector<T>> gates;
  std::vector<T> output;
};

template <typename T>
struct EncodeResult {
  std::vector<T> embedding;
  BasicForwardCache<T> cache;
};

// Throws DataError on an empty sequence.
template <typename T>
EncodeResult<T> encoder_forward(const BasicEncoderParams<T>& params,
                                std::span<const TokenId> token_ids);

// Embedding only; no cache is kept.
template <typename T>
std::vector<T> encode(const BasicEncoderParams<T>& params, std::span<const TokenId> token_ids);

// Gradient buffers shaped like the params. Word-embedding gradients are
// sparse rows keyed by token id; frozen (out-of-vocabulary) ids never
// appear.
template <typename T>
struct BasicGradients {
  std::map<TokenId, std::vector<T>> embedding_rows;
  BasicTensor<T> rnn_input_weights;
  BasicTensor<T> rnn_recurrent_weights;
  BasicTensor<T> rnn_bias;
  BasicTensor<T> proj_weights;
  BasicTensor<T> proj_bias;

  BasicGradients() = default;
  explicit BasicGradients(const EncoderDims& dims);

  void zero();
  void scale(T factor);
  bool all_zero() const;

  template <typename F>
  void for_each_dense(F&& f) {
    visit(*this, f);
  }
  template <typename F>
  void for_each_dense(F&& f) const {
    visit(*this, f);
  }

 private:
  template <typename Self, typename F>
  static void visit(Self& self, F& f) {
    f("rnn_input_weights", self.rnn_input_weights);
    f("rnn_recurrent_weights", self.rnn_recurrent_weights);
    f("rnn_bias", self.rnn_bias);
    f("proj_weights", self.proj_weights);
    f("proj_bias", self.proj_bias);
  }
};

using Gradients = BasicGradients<float>;

// Backpropagation through time. Adds d(loss)/d(params) into `grads`, given
// d(loss)/d(embedding).
template <typename T>
void encoder_backward(const BasicEncoderParams<T>& params, const BasicForwardCache<T>& cache,
                      std::span<const T> d_embedding, BasicGradients<T>& grads);

template <typename T>
struct LossResult {
  double loss = 0.0;
  BasicGradients<T> grads;
};

// Cosine embedding loss between the command embedding and a constant
// target feature, with exact gradients. A negative sample whose hinge is
// inactive contributes nothing.
template <typename T>
LossResult<T> loss_and_backward(const BasicEncoderParams<T>& params,
                                std::span<const TokenId> token_ids, std::span<const float> target,
                                int label, double margin);

// Same, accumulating into existing buffers. Returns the loss.
template <typename T>
double accumulate_loss_and_backward(const BasicEncoderParams<T>& params,
                                    std::span<const TokenId> token_ids,
                                    std::span<const float> target, int label, double margin,
                                    BasicGradients<T>& grads);

}  // namespace vground::core

#endif  // VGROUND_CORE_ENCODER_H_
