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

#include "vground/core/gradcheck.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "vground/core/cosine.h"
#include "vground/util/rng.h"

namespace vground::core {
namespace {

constexpr std::size_t kMinSampledCoordinates = 200;

struct Coordinate {
  std::size_t tensor = 0;  // for_each_tensor slot
  std::size_t index = 0;   // flat index into the tensor
};

double sample_loss(const BasicEncoderParams<double>& p, const GradCheckSample& s) {
  const std::vector<double> e = encode(p, std::span<const TokenId>(s.token_ids));
  return cosine_embedding_loss(std::span<const double>(e), std::span<const float>(s.target),
                               s.label, s.margin);
}

}  // namespace

double relative_error(double analytic, double numeric) {
  const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
  return std::abs(analytic - numeric) / scale;
}

double max_relative_error(const std::function<double(std::span<const double>)>& f,
                          std::span<const double> x, std::span<const double> analytic,
                          double epsilon) {
  std::vector<double> probe(x.begin(), x.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < probe.size(); ++i) {
    const double saved = probe[i];
    probe[i] = saved + epsilon;
    const double up = f(probe);
    probe[i] = saved - epsilon;
    const double down = f(probe);
    probe[i] = saved;
    worst = std::max(worst, relative_error(analytic[i], (up - down) / (2.0 * epsilon)));
  }
  return worst;
}

GradCheckResult grad_check(const EncoderParams& params, const GradCheckSample& sample,
                           const GradCheckOptions& options) {
  BasicEncoderParams<double> p = params.cast<double>();
  const LossResult<double> analytic =
      loss_and_backward(p, std::span<const TokenId>(sample.token_ids),
                        std::span<const float>(sample.target), sample.label, sample.margin);

  std::vector<BasicTensor<double>*> tensors;
  std::vector<std::string> names;
  p.for_each_tensor([&](const char* name, BasicTensor<double>& t) {
    tensors.push_back(&t);
    names.emplace_back(name);
  });
  std::vector<const BasicTensor<double>*> dense;
  analytic.grads.for_each_dense(
      [&](const char*, const BasicTensor<double>& t) { dense.push_back(&t); });

  std::vector<Coordinate> coords;
  const std::size_t d_w = p.dims.word_dim;
  std::set<TokenId> touched;
  for (TokenId id : sample.token_ids) {
    if (id < p.dims.vocab_size) touched.insert(id);
  }
  for (TokenId id : touched) {
    for (std::size_t j = 0; j < d_w; ++j) coords.push_back({0, id * d_w + j});
  }
  for (std::size_t slot = 1; slot < tensors.size(); ++slot) {
    for (std::size_t i = 0; i < tensors[slot]->size(); ++i) coords.push_back({slot, i});
  }
  if (options.max_coordinates > 0) {
    const std::size_t keep = std::max(options.max_coordinates, kMinSampledCoordinates);
    if (keep < coords.size()) {
      Rng rng(options.seed);
      rng.shuffle(coords.begin(), coords.end());
      coords.resize(keep);
    }
  }

  auto analytic_at = [&](const Coordinate& c) -> double {
    if (c.tensor > 0) return (*dense[c.tensor - 1])[c.index];
    auto it = analytic.grads.embedding_rows.find(static_cast<TokenId>(c.index / d_w));
    return it == analytic.grads.embedding_rows.end() ? 0.0 : it->second[c.index % d_w];
  };

  GradCheckResult result;
  result.coordinates = coords.size();
  for (const Coordinate& c : coords) {
    double& value = (*tensors[c.tensor])[c.index];
    const double saved = value;
    value = saved + options.epsilon;
    const double up = sample_loss(p, sample);
    value = saved - options.epsilon;
    const double down = sample_loss(p, sample);
    value = saved;
    const double numeric = (up - down) / (2.0 * options.epsilon);
    const double err = relative_error(analytic_at(c), numeric);
    if (err > result.max_relative_error || result.worst_tensor.empty()) {
      result.max_relative_error = std::max(err, result.max_relative_error);
      result.worst_tensor = names[c.tensor];
      result.worst_index = c.index;
    }
  }
  return result;
}

GradCheckCase random_gradcheck_case(std::uint64_t seed, CellType cell, std::size_t vocab,
                                    std::size_t word_dim, std::size_t hidden, std::size_t output) {
  GradCheckCase out;
  out.params = init_params(EncoderDims{vocab, word_dim, hidden, output, cell}, seed);
  Rng rng(derive_seed(seed, 1));
  for (float& b : out.params.rnn_bias.values) b = static_cast<float>(rng.uniform(-0.5, 0.5));
  for (float& b : out.params.proj_bias.values) b = static_cast<float>(rng.uniform(-0.1, 0.1));
  const std::size_t len = 3 + rng.uniform_index(6);
  for (std::size_t i = 0; i < len; ++i) {
    out.sample.token_ids.push_back(static_cast<TokenId>(rng.uniform_index(vocab)));
  }
  out.sample.target.resize(output);
  for (float& v : out.sample.target) v = static_cast<float>(rng.normal());
  if (seed % 2 == 0) {
    out.sample.label = 1;
    out.sample.margin = 0.0;
  } else {
    out.sample.label = -1;
    out.sample.margin = -0.5;
  }
  return out;
}

}  // namespace vground::core
