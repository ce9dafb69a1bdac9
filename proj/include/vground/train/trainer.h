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

#ifndef VGROUND_TRAIN_TRAINER_H_
#define VGROUND_TRAIN_TRAINER_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "vground/core/encoder.h"
#include "vground/dataset/sampling.h"
#include "vground/dataset/vocabulary.h"

namespace vground::train {

struct TrainConfig {
  std::size_t epochs = 50;
  double lr = 1e-4;
  double margin = 0.0;
  std::size_t batch_size = 1;
  std::uint64_t seed = 0;
  std::size_t word_dim = 128;
  std::size_t hidden_dim = 256;
  std::size_t output_dim = 2048;
  dataset::UnkPolicy unk_policy = dataset::UnkPolicy::kHashedRandom;
  core::CellType cell = core::CellType::kElman;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  // Stop after this many epochs without improvement of the monitored loss;
  // 0 disables early stopping.
  std::size_t early_stop_patience = 0;
  // Share of samples held back to monitor early stopping. With 0 the
  // training loss itself is monitored.
  double validation_fraction = 0.0;

  // Throws ConfigError for out-of-range fields. lr may be 0.
  void validate() const;

  nlohmann::json to_json() const;
  // Absent keys keep defaults; unknown keys raise ConfigError.
  static TrainConfig from_json(const nlohmann::json& j);

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

struct TrainingMetadata {
  std::vector<double> epoch_losses;
  std::vector<double> validation_losses;  // empty without a validation set
  std::size_t epochs_run = 0;
  std::size_t n_samples = 0;
  // FNV-1a of the serialized training samples, hex.
  std::string data_fingerprint;

  friend bool operator==(const TrainingMetadata&, const TrainingMetadata&) = default;
};

struct ModelCheckpoint {
  TrainConfig config;
  dataset::Vocabulary vocab{dataset::UnkPolicy::kHashedRandom, 0};
  core::EncoderParams params;
  TrainingMetadata metadata;

  // Command embedding for already tokenized text.
  std::vector<float> embed(std::span<const std::string> tokens) const;
};

struct EpochLog {
  std::size_t epoch = 0;  // 1-based
  double mean_loss = 0.0;
  double wall_ms = 0.0;

  // {"epoch":..,"mean_loss":..,"wall_ms":..}
  std::string to_json_line() const;
};

using EpochCallback = std::function<void(const EpochLog&)>;

// Builds the vocabulary from the sample commands (first occurrence order),
// initializes parameters from config.seed and runs config.epochs epochs of
// Adam over a per-epoch seeded permutation. Gradients of a batch are
// averaged. The result depends only on (config, samples); timings reach
// only the callback.
//
// Throws DataError for empty input or feature dims other than
// config.output_dim, and NumericalError naming the epoch and sample when a
// loss or gradient stops being finite.
ModelCheckpoint train(const TrainConfig& config, std::span<const dataset::TrainingSample> samples,
                      const EpochCallback& on_epoch = {});

}  // namespace vground::train

#endif  // VGROUND_TRAIN_TRAINER_H_
