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

#ifndef VGROUND_CLI_RUN_CONFIG_H_
#define VGROUND_CLI_RUN_CONFIG_H_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "vground/dataset/commands.h"
#include "vground/eval/retrieval.h"
#include "vground/train/trainer.h"

namespace vground::cli {

struct MinerSection {
  std::vector<std::string> relations = {"dobj", "obj"};
  // Empty: the shipped data/verbs.txt.
  std::string verb_whitelist;
  bool use_verb_whitelist = true;
  // Required by `mine`.
  std::string object_whitelist;
  std::uint64_t min_frequency = 1;
};

struct DatasetSection {
  // Empty: the shipped data/templates.txt.
  std::string templates_path;
  double holdout_fraction = 0.2;
  std::uint64_t seed = 0;
  // Command form of training samples.
  dataset::CommandMode mode = dataset::CommandMode::kVerbOnly;
  // Positive samples built by `build`.
  std::size_t size = 2000;
  // Train and evaluate on disjoint halves of each template form.
  bool disjoint_templates = false;
};

struct ModelSection {
  std::size_t word_dim = 128;
  std::size_t hidden_dim = 256;
  std::size_t output_dim = 2048;
  core::CellType cell = core::CellType::kElman;
  double margin = 0.0;
  dataset::UnkPolicy unk_policy = dataset::UnkPolicy::kHashedRandom;
};

struct TrainSection {
  std::size_t epochs = 50;
  double lr = 1e-4;
  std::size_t batch_size = 1;
  std::uint64_t seed = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  std::size_t early_stop_patience = 0;
  double validation_fraction = 0.0;
};

struct EvalSection {
  std::size_t n_tasks = 200;
  std::size_t runs = 5;
  std::uint64_t seed = 0;
  dataset::CommandMode mode = dataset::CommandMode::kVerbOnly;
  std::vector<std::string> nonce_words = {"dax", "blicket", "wug", "toma", "fep"};
};

// Sections and fields absent from the JSON keep their defaults; unknown
// sections or fields raise ConfigError.
struct RunConfig {
  MinerSection miner;
  DatasetSection dataset;
  ModelSection model;
  TrainSection train;
  EvalSection eval;

  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig load(const std::string& path);
  nlohmann::json to_json() const;

  train::TrainConfig train_config() const;
  eval::EvalConfig eval_config() const;
};

// $VGROUND_DATA_DIR, else the data directory of the source tree.
std::string data_dir();
std::string default_templates_path();
std::string default_verbs_path();

// Relative output paths are placed under $VGROUND_OUTPUT_ROOT when set.
std::string output_path(const std::string& path);

}  // namespace vground::cli

#endif  // VGROUND_CLI_RUN_CONFIG_H_
