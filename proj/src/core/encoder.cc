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

#include "vground/core/encoder.h"

#include <cmath>

#include "vground/core/cosine.h"
#include "vground/util/error.h"
#include "vground/util/rng.h"

namespace vground::core {
namespace {

template <typename T>
T sigmoid(T x) {
  return T(1) / (T(1) + std::exp(-x));
}

template <typename T>
T dot(std::span<const T> a, std::span<const T> b) {
  T acc = T(0);
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

// out[j] += sum_i m(i, j) * v[i] over rows [row0, row0 + v.size()).
template <typename T>
void add_transposed(const BasicTensor<T>& m, std::size_t row0, std::span<const T> v,
                    std::span<T> out) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    const T vi = v[i];
    if (vi == T(0)) continue;
    const auto r = m.row(row0 + i);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += r[j] * vi;
  }
}

// m(row0 + i, j) += v[i] * u[j]
template <typename T>
void add_outer(BasicTensor<T>& m, std::size_t row0, std::span<const T> v, std::span<const T> u) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    const T vi = v[i];
    if (vi == T(0)) continue;
    auto r = m.row(row0 + i);
    for (std::size_t j = 0; j < u.size(); ++j) r[j] += vi * u[j];
  }
}

template <typename T>
std::vector<T> input_vector(const BasicEncoderParams<T>& params, TokenId id) {
  if (id < params.dims.vocab_size) {
    const auto r = params.word_embeddings.row(id);
    return {r.begin(), r.end()};
  }
  const std::vector<float> frozen = oov_embedding(params.oov_seed, id, params.dims.word_dim);
  return {frozen.begin(), frozen.end()};
}

template <typename T>
std::vector<T> forward_impl(const BasicEncoderParams<T>& params,
                            std::span<const TokenId> token_ids, BasicForwardCache<T>* cache) {
  if (token_ids.empty()) throw DataError("cannot encode an empty token sequence");
  const EncoderDims& d = params.dims;
  const std::size_t h = d.hidden_dim;
  const bool gated = d.cell == CellType::kGated;

  std::vector<T> h_prev(h, T(0));
  std::vector<T> h_next(h);
  if (cache) {
    cache->token_ids.assign(token_ids.begin(), token_ids.end());
    cache->inputs.clear();
    cache->gates.clear();
    cache->hidden.assign(1, h_prev);
  }
  std::vector<T> gate_buf(gated ? 4 * h : 0);

  for (TokenId id : token_ids) {
    std::vector<T> x = input_vector(params, id);
    const std::span<const T> xs(x);
    const std::span<const T> hs(h_prev);
    if (!gated) {
      for (std::size_t i = 0; i < h; ++i) {
        T acc = params.rnn_bias[i];
        acc += dot(params.rnn_input_weights.row(i), xs);
        acc += dot(params.rnn_recurrent_weights.row(i), hs);
        h_next[i] = std::tanh(acc);
      }
    } else {
      for (std::size_t i = 0; i < h; ++i) {
        const T az = params.rnn_bias[i] + dot(params.rnn_input_weights.row(i), xs) +
                     dot(params.rnn_recurrent_weights.row(i), hs);
        const T ar = params.rnn_bias[h + i] + dot(params.rnn_input_weights.row(h + i), xs) +
                     dot(params.rnn_recurrent_weights.row(h + i), hs);
        const T u = dot(params.rnn_recurrent_weights.row(2 * h + i), hs);
        const T z = sigmoid(az);
        const T r = sigmoid(ar);
        const T n = std::tanh(params.rnn_bias[2 * h + i] +
                              dot(params.rnn_input_weights.row(2 * h + i), xs) + r * u);
        h_next[i] = (T(1) - z) * n + z * h_prev[i];
        gate_buf[i] = z;
        gate_buf[h + i] = r;
        gate_buf[2 * h + i] = n;
        gate_buf[3 * h + i] = u;
      }
    }
    std::swap(h_prev, h_next);
    if (cache) {
      cache->inputs.push_back(std::move(x));
      cache->hidden.push_back(h_prev);
      if (gated) cache->gates.push_back(gate_buf);
    }
  }

  std::vector<T> out(d.output_dim);
  for (std::size_t k = 0; k < d.output_dim; ++k) {
    out[k] = params.proj_bias[k] + dot(params.proj_weights.row(k), std::span<const T>(h_prev));
  }
  if (cache) cache->output = out;
  return out;
}

}  // namespace

const char* to_string(CellType cell) { return cell == CellType::kElman ? "elman" : "gated"; }

CellType parse_cell_type(std::string_view text) {
  if (text == "elman") return CellType::kElman;
  if (text == "gated") return CellType::kGated;
  throw ConfigError("unknown cell '" + std::string(text) + "' (expected elman or gated)");
}

std::vector<std::size_t> tensor_shape(const EncoderDims& d, std::string_view name) {
  const std::size_t gh = gate_count(d.cell) * d.hidden_dim;
  if (name == "word_embeddings") return {d.vocab_size, d.word_dim};
  if (name == "rnn_input_weights") return {gh, d.word_dim};
  if (name == "rnn_recurrent_weights") return {gh, d.hidden_dim};
  if (name == "rnn_bias") return {gh};
  if (name == "proj_weights") return {d.output_dim, d.hidden_dim};
  if (name == "proj_bias") return {d.output_dim};
  throw DataError("unknown tensor '" + std::string(name) + "'");
}

EncoderParams init_params(const EncoderDims& dims, std::uint64_t seed) {
  if (dims.vocab_size == 0 || dims.word_dim == 0 || dims.hidden_dim == 0 || dims.output_dim == 0) {
    throw ConfigError("encoder dims must all be >= 1");
  }
  EncoderParams p;
  p.dims = dims;
  p.oov_seed = seed;
  Rng rng(seed);
  p.for_each_tensor([&](const char* name, Tensor& t) {
    t = Tensor(tensor_shape(dims, name));
    if (t.shape.size() < 2) return;  // biases start at zero
    const double a = 1.0 / std::sqrt(static_cast<double>(t.cols()));
    for (float& v : t.values) v = static_cast<float>(rng.uniform(-a, a));
  });
  return p;
}

std::vector<float> oov_embedding(std::uint64_t oov_seed, TokenId id, std::size_t word_dim) {
  Rng rng(derive_seed(oov_seed, id));
  const double a = 1.0 / std::sqrt(static_cast<double>(word_dim));
  std::vector<float> v(word_dim);
  for (float& x : v) x = static_cast<float>(rng.uniform(-a, a));
  return v;
}

template <typename T>
EncodeResult<T> encoder_forward(const BasicEncoderParams<T>& params,
                                std::span<const TokenId> token_ids) {
  EncodeResult<T> result;
  result.embedding = forward_impl(params, token_ids, &result.cache);
  return result;
}

template <typename T>
std::vector<T> encode(const BasicEncoderParams<T>& params, std::span<const TokenId> token_ids) {
  return forward_impl<T>(params, token_ids, nullptr);
}

template <typename T>
BasicGradients<T>::BasicGradients(const EncoderDims& dims) {
  for_each_dense([&](const char* name, BasicTensor<T>& t) {
    t = BasicTensor<T>(tensor_shape(dims, name));
  });
}

template <typename T>
void BasicGradients<T>::zero() {
  embedding_rows.clear();
  for_each_dense([](const char*, BasicTensor<T>& t) { t.zero(); });
}

template <typename T>
void BasicGradients<T>::scale(T factor) {
  for (auto& [id, row] : embedding_rows) {
    for (T& v : row) v *= factor;
  }
  for_each_dense([&](const char*, BasicTensor<T>& t) {
    for (T& v : t.values) v *= factor;
  });
}

template <typename T>
bool BasicGradients<T>::all_zero() const {
  bool zero = true;
  for (const auto& [id, row] : embedding_rows) {
    for (T v : row) zero = zero && v == T(0);
  }
  for_each_dense([&](const char*, const BasicTensor<T>& t) {
    for (T v : t.values) zero = zero && v == T(0);
  });
  return zero;
}

template <typename T>
void encoder_backward(const BasicEncoderParams<T>& params, const BasicForwardCache<T>& cache,
                      std::span<const T> d_embedding, BasicGradients<T>& grads) {
  const EncoderDims& d = params.dims;
  const std::size_t h = d.hidden_dim;
  const std::size_t steps = cache.token_ids.size();
  const bool gated = d.cell == CellType::kGated;

  const std::span<const T> h_last(cache.hidden[steps]);
  for (std::size_t k = 0; k < d.output_dim; ++k) grads.proj_bias[k] += d_embedding[k];
  add_outer(grads.proj_weights, 0, d_embedding, h_last);
  std::vector<T> dh(h, T(0));
  add_transposed(params.proj_weights, 0, d_embedding, std::span<T>(dh));

  std::vector<T> dh_prev(h);
  std::vector<T> dx(d.word_dim);
  std::vector<T> da(h);
  std::vector<T> daz(h), dar(h), dan(h), du(h);
  for (std::size_t t = steps; t-- > 0;) {
    const std::span<const T> x(cache.inputs[t]);
    const std::span<const T> h_prev(cache.hidden[t]);
    std::fill(dx.begin(), dx.end(), T(0));
    std::fill(dh_prev.begin(), dh_prev.end(), T(0));

    if (!gated) {
      const std::vector<T>& h_t = cache.hidden[t + 1];
      for (std::size_t i = 0; i < h; ++i) da[i] = dh[i] * (T(1) - h_t[i] * h_t[i]);
      const std::span<const T> das(da);
      add_outer(grads.rnn_input_weights, 0, das, x);
      add_outer(grads.rnn_recurrent_weights, 0, das, h_prev);
      for (std::size_t i = 0; i < h; ++i) grads.rnn_bias[i] += da[i];
      add_transposed(params.rnn_input_weights, 0, das, std::span<T>(dx));
      add_transposed(params.rnn_recurrent_weights, 0, das, std::span<T>(dh_prev));
    } else {
      const std::vector<T>& g = cache.gates[t];
      for (std::size_t i = 0; i < h; ++i) {
        const T z = g[i], r = g[h + i], n = g[2 * h + i], u = g[3 * h + i];
        const T dn = dh[i] * (T(1) - z);
        const T dz = dh[i] * (h_prev[i] - n);
        dh_prev[i] = dh[i] * z;
        dan[i] = dn * (T(1) - n * n);
        du[i] = dan[i] * r;
        dar[i] = dan[i] * u * r * (T(1) - r);
        daz[i] = dz * z * (T(1) - z);
      }
      const std::span<const T> sz(daz), sr(dar), sn(dan), su(du);
      add_outer(grads.rnn_input_weights, 0, sz, x);
      add_outer(grads.rnn_input_weights, h, sr, x);
      add_outer(grads.rnn_input_weights, 2 * h, sn, x);
      add_outer(grads.rnn_recurrent_weights, 0, sz, h_prev);
      add_outer(grads.rnn_recurrent_weights, h, sr, h_prev);
      add_outer(grads.rnn_recurrent_weights, 2 * h, su, h_prev);
      for (std::size_t i = 0; i < h; ++i) {
        grads.rnn_bias[i] += daz[i];
        grads.rnn_bias[h + i] += dar[i];
        grads.rnn_bias[2 * h + i] += dan[i];
      }
      add_transposed(params.rnn_input_weights, 0, sz, std::span<T>(dx));
      add_transposed(params.rnn_input_weights, h, sr, std::span<T>(dx));
      add_transposed(params.rnn_input_weights, 2 * h, sn, std::span<T>(dx));
      add_transposed(params.rnn_recurrent_weights, 0, sz, std::span<T>(dh_prev));
      add_transposed(params.rnn_recurrent_weights, h, sr, std::span<T>(dh_prev));
      add_transposed(params.rnn_recurrent_weights, 2 * h, su, std::span<T>(dh_prev));
    }

    const TokenId id = cache.token_ids[t];
    if (id < d.vocab_size) {
      auto [it, inserted] = grads.embedding_rows.try_emplace(id, d.word_dim, T(0));
      for (std::size_t j = 0; j < d.word_dim; ++j) it->second[j] += dx[j];
    }
    std::swap(dh, dh_prev);
  }
}

template <typename T>
double accumulate_loss_and_backward(const BasicEncoderParams<T>& params,
                                    std::span<const TokenId> token_ids,
                                    std::span<const float> target, int label, double margin,
                                    BasicGradients<T>& grads) {
  if (target.size() != params.dims.output_dim) {
    throw DataError("target feature has dim " + std::to_string(target.size()) + ", encoder emits " +
                    std::to_string(params.dims.output_dim));
  }
  EncodeResult<T> fwd = encoder_forward(params, token_ids);
  std::vector<T> d_embedding(fwd.embedding.size());
  const double loss = cosine_embedding_loss_grad(std::span<const T>(fwd.embedding), target, label,
                                                 margin, std::span<T>(d_embedding));
  // Flat hinge region: nothing flows back.
  if (label == -1 && loss == 0.0) return loss;
  encoder_backward(params, fwd.cache, std::span<const T>(d_embedding), grads);
  return loss;
}

template <typename T>
LossResult<T> loss_and_backward(const BasicEncoderParams<T>& params,
                                std::span<const TokenId> token_ids, std::span<const float> target,
                                int label, double margin) {
  LossResult<T> result{0.0, BasicGradients<T>(params.dims)};
  result.loss = accumulate_loss_and_backward(params, token_ids, target, label, margin, result.grads);
  return result;
}

#define VGROUND_INSTANTIATE(T)                                                                   \
  template EncodeResult<T> encoder_forward(const BasicEncoderParams<T>&,                        \
                                           std::span<const TokenId>);                           \
  template std::vector<T> encode(const BasicEncoderParams<T>&, std::span<const TokenId>);       \
  template struct BasicGradients<T>;                                                            \
  template void encoder_backward(const BasicEncoderParams<T>&, const BasicForwardCache<T>&,     \
                                 std::span<const T>, BasicGradients<T>&);                       \
  template double accumulate_loss_and_backward(const BasicEncoderParams<T>&,                    \
                                               std::span<const TokenId>, std::span<const float>, \
                                               int, double, BasicGradients<T>&);                \
  template LossResult<T> loss_and_backward(const BasicEncoderParams<T>&, std::span<const TokenId>, \
                                           std::span<const float>, int, double);

VGROUND_INSTANTIATE(float)
VGROUND_INSTANTIATE(double)

#undef VGROUND_INSTANTIATE

}  // namespace vground::core
