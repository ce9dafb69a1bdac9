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

#include "vground/train/trainer.h"

#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "vground/core/adam.h"
#include "vground/core/cosine.h"
#include "vground/util/error.h"
#include "vground/util/hash.h"
#include "vground/util/rng.h"

namespace vground::train {
namespace {

using nlohmann::json;

constexpr std::uint64_t kValidationStream = 0x76616c6964ULL;

struct Encoded {
  std::vector<core::TokenId> ids;
  const dataset::TrainingSample* sample = nullptr;
};

double validation_loss(const core::EncoderParams& params, std::span<const Encoded> set,
                       double margin) {
  double total = 0.0;
  for (const Encoded& e : set) {
    const std::vector<float> emb = core::encode(params, std::span<const core::TokenId>(e.ids));
    total += core::cosine_embedding_loss(std::span<const float>(emb),
                                         std::span<const float>(e.sample->feature),
                                         e.sample->label, margin);
  }
  return total / static_cast<double>(set.size());
}

}  // namespace

void TrainConfig::validate() const {
  if (epochs < 1) throw ConfigError("train.epochs must be >= 1");
  if (!(lr >= 0.0) || !std::isfinite(lr)) throw ConfigError("train.lr must be finite and >= 0");
  if (batch_size < 1) throw ConfigError("train.batch_size must be >= 1");
  if (!(margin >= -1.0 && margin <= 1.0)) throw ConfigError("model.margin must lie in [-1, 1]");
  if (word_dim < 1 || hidden_dim < 1 || output_dim < 1) {
    throw ConfigError("model dims must be >= 1");
  }
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw ConfigError("Adam betas must lie in [0, 1)");
  }
  if (!(adam_epsilon > 0.0)) throw ConfigError("Adam epsilon must be > 0");
  if (!(validation_fraction >= 0.0 && validation_fraction < 1.0)) {
    throw ConfigError("train.validation_fraction must lie in [0, 1)");
  }
}

json TrainConfig::to_json() const {
  json j;
  j["epochs"] = epochs;
  j["lr"] = lr;
  j["margin"] = margin;
  j["batch_size"] = batch_size;
  j["seed"] = seed;
  j["word_dim"] = word_dim;
  j["hidden_dim"] = hidden_dim;
  j["output_dim"] = output_dim;
  j["unk_policy"] = dataset::to_string(unk_policy);
  j["cell"] = core::to_string(cell);
  j["beta1"] = beta1;
  j["beta2"] = beta2;
  j["adam_epsilon"] = adam_epsilon;
  j["early_stop_patience"] = early_stop_patience;
  j["validation_fraction"] = validation_fraction;
  return j;
}

TrainConfig TrainConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("train config must be a JSON object");
  TrainConfig c;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "epochs") c.epochs = value.get<std::size_t>();
      else if (key == "lr") c.lr = value.get<double>();
      else if (key == "margin") c.margin = value.get<double>();
      else if (key == "batch_size") c.batch_size = value.get<std::size_t>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "word_dim") c.word_dim = value.get<std::size_t>();
      else if (key == "hidden_dim") c.hidden_dim = value.get<std::size_t>();
      else if (key == "output_dim") c.output_dim = value.get<std::size_t>();
      else if (key == "unk_policy") c.unk_policy = dataset::parse_unk_policy(value.get<std::string>());
      else if (key == "cell") c.cell = core::parse_cell_type(value.get<std::string>());
      else if (key == "beta1") c.beta1 = value.get<double>();
      else if (key == "beta2") c.beta2 = value.get<double>();
      else if (key == "adam_epsilon") c.adam_epsilon = value.get<double>();
      else if (key == "early_stop_patience") c.early_stop_patience = value.get<std::size_t>();
      else if (key == "validation_fraction") c.validation_fraction = value.get<double>();
      else throw ConfigError("train config: unknown field '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("train config: ") + e.what());
  }
  return c;
}

std::vector<float> ModelCheckpoint::embed(std::span<const std::string> tokens) const {
  const dataset::TokenizedCommand cmd = vocab.encode(tokens);
  return core::encode(params, std::span<const core::TokenId>(cmd.token_ids));
}

std::string EpochLog::to_json_line() const {
  json j;
  j["epoch"] = epoch;
  j["mean_loss"] = mean_loss;
  j["wall_ms"] = wall_ms;
  return j.dump();
}

ModelCheckpoint train(const TrainConfig& config, std::span<const dataset::TrainingSample> samples,
                      const EpochCallback& on_epoch) {
  config.validate();
  if (samples.empty()) throw DataError("no training samples");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].feature.size() != config.output_dim) {
      throw DataError("sample " + std::to_string(i) + " has feature dim " +
                      std::to_string(samples[i].feature.size()) + ", model expects " +
                      std::to_string(config.output_dim));
    }
    if (samples[i].label != 1 && samples[i].label != -1) {
      throw DataError("sample " + std::to_string(i) + " has a label other than +1/-1");
    }
  }

  ModelCheckpoint ckpt;
  ckpt.config = config;
  std::vector<std::vector<std::string>> commands;
  commands.reserve(samples.size());
  for (const auto& s : samples) commands.push_back(s.tokens);
  ckpt.vocab = dataset::Vocabulary::build(commands, config.unk_policy, config.seed);

  std::vector<Encoded> encoded;
  encoded.reserve(samples.size());
  for (const auto& s : samples) {
    encoded.push_back({ckpt.vocab.encode(s.tokens).token_ids, &s});
  }

  std::vector<Encoded> validation;
  if (config.validation_fraction > 0.0) {
    const auto n_val = static_cast<std::size_t>(
        std::llround(config.validation_fraction * static_cast<double>(encoded.size())));
    if (n_val >= encoded.size()) throw ConfigError("validation_fraction leaves no training samples");
    Rng rng(derive_seed(config.seed, kValidationStream));
    rng.shuffle(encoded.begin(), encoded.end());
    validation.assign(encoded.end() - static_cast<std::ptrdiff_t>(n_val), encoded.end());
    encoded.resize(encoded.size() - n_val);
  }

  const core::EncoderDims dims{ckpt.vocab.size(), config.word_dim, config.hidden_dim,
                               config.output_dim, config.cell};
  ckpt.params = core::init_params(dims, config.seed);
  core::AdamState adam = core::AdamState::for_params(
      ckpt.params, core::AdamConfig{config.lr, config.beta1, config.beta2, config.adam_epsilon});

  ckpt.metadata.n_samples = samples.size();
  ckpt.metadata.data_fingerprint = hex64(fnv1a64(dataset::serialize_samples(samples)));

  std::vector<std::size_t> order(encoded.size());
  core::Gradients grads(dims);
  double best = std::numeric_limits<double>::infinity();
  std::size_t stale = 0;
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(derive_seed(config.seed, epoch));
    rng.shuffle(order.begin(), order.end());

    double total = 0.0;
    for (std::size_t b = 0; b < order.size(); b += config.batch_size) {
      const std::size_t end = std::min(order.size(), b + config.batch_size);
      grads.zero();
      for (std::size_t k = b; k < end; ++k) {
        const Encoded& e = encoded[order[k]];
        const double loss = core::accumulate_loss_and_backward(
            ckpt.params, std::span<const core::TokenId>(e.ids),
            std::span<const float>(e.sample->feature), e.sample->label, config.margin, grads);
        if (!std::isfinite(loss)) {
          throw NumericalError("non-finite loss at epoch " + std::to_string(epoch) + ", sample " +
                               std::to_string(order[k]));
        }
        total += loss;
      }
      if (end - b > 1) grads.scale(1.0f / static_cast<float>(end - b));
      try {
        core::adam_step(ckpt.params, grads, adam);
      } catch (const NumericalError& err) {
        throw NumericalError(std::string(err.what()) + " at epoch " + std::to_string(epoch) +
                             ", sample " + std::to_string(order[end - 1]));
      }
    }
    const double mean = total / static_cast<double>(order.size());
    ckpt.metadata.epoch_losses.push_back(mean);
    ckpt.metadata.epochs_run = epoch;

    double monitored = mean;
    if (!validation.empty()) {
      monitored = validation_loss(ckpt.params, validation, config.margin);
      ckpt.metadata.validation_losses.push_back(monitored);
    }
    if (on_epoch) {
      const std::chrono::duration<double, std::milli> elapsed =
          std::chrono::steady_clock::now() - start;
      on_epoch(EpochLog{epoch, mean, elapsed.count()});
    }
    if (config.early_stop_patience > 0) {
      if (monitored < best) {
        best = monitored;
        stale = 0;
      } else if (++stale >= config.early_stop_patience) {
        break;
      }
    }
  }
  return ckpt;
}

}  // namespace vground::train
