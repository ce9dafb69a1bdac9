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

#include "vground/cli/run_config.h"

#include <cstdlib>
#include <algorithm>
#include <filesystem>
#include <type_traits>

#include "vground/util/binio.h"
#include "vground/util/error.h"

#ifndef VGROUND_DEFAULT_DATA_DIR
#define VGROUND_DEFAULT_DATA_DIR "data"
#endif

namespace vground::cli {
namespace {

using nlohmann::json;

// Reads `key` of section `name` into `field` when present.
class SectionReader {
 public:
  SectionReader(const json& j, std::string name) : j_(j), name_(std::move(name)) {
    if (!j_.is_object()) throw ConfigError("section '" + name_ + "' must be a JSON object");
  }

  template <typename T>
  SectionReader& read(const char* key, T& field) {
    seen_.push_back(key);
    if (auto it = j_.find(key); it != j_.end()) {
      if constexpr (std::is_unsigned_v<T> && !std::is_same_v<T, bool>) {
        if (!it->is_number_unsigned()) {
          throw ConfigError(name_ + "." + key + " must be a non-negative integer");
        }
      }
      try {
        field = it->template get<T>();
      } catch (const json::exception&) {
        throw ConfigError(name_ + "." + key + " has the wrong type");
      }
    }
    return *this;
  }

  template <typename T, typename Parse>
  SectionReader& read_enum(const char* key, T& field, Parse parse) {
    std::string text;
    read(key, text);
    if (!text.empty()) field = parse(text);
    return *this;
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (std::find(seen_.begin(), seen_.end(), key) == seen_.end()) {
        throw ConfigError("unknown field '" + name_ + "." + key + "'");
      }
    }
  }

 private:
  const json& j_;
  std::string name_;
  std::vector<std::string> seen_;
};

}  // namespace

RunConfig RunConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("run config must be a JSON object");
  RunConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "miner") {
      SectionReader(value, key)
          .read("relations", c.miner.relations)
          .read("verb_whitelist", c.miner.verb_whitelist)
          .read("use_verb_whitelist", c.miner.use_verb_whitelist)
          .read("object_whitelist", c.miner.object_whitelist)
          .read("min_frequency", c.miner.min_frequency)
          .finish();
    } else if (key == "dataset") {
      SectionReader(value, key)
          .read("templates_path", c.dataset.templates_path)
          .read("holdout_fraction", c.dataset.holdout_fraction)
          .read("seed", c.dataset.seed)
          .read_enum("mode", c.dataset.mode, dataset::parse_command_mode)
          .read("size", c.dataset.size)
          .read("disjoint_templates", c.dataset.disjoint_templates)
          .finish();
    } else if (key == "model") {
      SectionReader(value, key)
          .read("word_dim", c.model.word_dim)
          .read("hidden_dim", c.model.hidden_dim)
          .read("output_dim", c.model.output_dim)
          .read_enum("cell", c.model.cell, core::parse_cell_type)
          .read("margin", c.model.margin)
          .read_enum("unk_policy", c.model.unk_policy, dataset::parse_unk_policy)
          .finish();
    } else if (key == "train") {
      SectionReader(value, key)
          .read("epochs", c.train.epochs)
          .read("lr", c.train.lr)
          .read("batch_size", c.train.batch_size)
          .read("seed", c.train.seed)
          .read("beta1", c.train.beta1)
          .read("beta2", c.train.beta2)
          .read("adam_epsilon", c.train.adam_epsilon)
          .read("early_stop_patience", c.train.early_stop_patience)
          .read("validation_fraction", c.train.validation_fraction)
          .finish();
    } else if (key == "eval") {
      SectionReader(value, key)
          .read("n_tasks", c.eval.n_tasks)
          .read("runs", c.eval.runs)
          .read("seed", c.eval.seed)
          .read_enum("mode", c.eval.mode, dataset::parse_command_mode)
          .read("nonce_words", c.eval.nonce_words)
          .finish();
    } else {
      throw ConfigError("unknown section '" + key + "'");
    }
  }
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return from_json(j);
}

json RunConfig::to_json() const {
  json j;
  j["miner"] = json{{"relations", miner.relations},
                    {"verb_whitelist", miner.verb_whitelist},
                    {"use_verb_whitelist", miner.use_verb_whitelist},
                    {"object_whitelist", miner.object_whitelist},
                    {"min_frequency", miner.min_frequency}};
  j["dataset"] = json{{"templates_path", dataset.templates_path},
                      {"holdout_fraction", dataset.holdout_fraction},
                      {"seed", dataset.seed},
                      {"mode", dataset::to_string(dataset.mode)},
                      {"size", dataset.size},
                      {"disjoint_templates", dataset.disjoint_templates}};
  j["model"] = json{{"word_dim", model.word_dim},
                    {"hidden_dim", model.hidden_dim},
                    {"output_dim", model.output_dim},
                    {"cell", core::to_string(model.cell)},
                    {"margin", model.margin},
                    {"unk_policy", dataset::to_string(model.unk_policy)}};
  j["train"] = json{{"epochs", train.epochs},
                    {"lr", train.lr},
                    {"batch_size", train.batch_size},
                    {"seed", train.seed},
                    {"beta1", train.beta1},
                    {"beta2", train.beta2},
                    {"adam_epsilon", train.adam_epsilon},
                    {"early_stop_patience", train.early_stop_patience},
                    {"validation_fraction", train.validation_fraction}};
  j["eval"] = json{{"n_tasks", eval.n_tasks},
                   {"runs", eval.runs},
                   {"seed", eval.seed},
                   {"mode", dataset::to_string(eval.mode)},
                   {"nonce_words", eval.nonce_words}};
  return j;
}

train::TrainConfig RunConfig::train_config() const {
  train::TrainConfig t;
  t.epochs = train.epochs;
  t.lr = train.lr;
  t.margin = model.margin;
  t.batch_size = train.batch_size;
  t.seed = train.seed;
  t.word_dim = model.word_dim;
  t.hidden_dim = model.hidden_dim;
  t.output_dim = model.output_dim;
  t.unk_policy = model.unk_policy;
  t.cell = model.cell;
  t.beta1 = train.beta1;
  t.beta2 = train.beta2;
  t.adam_epsilon = train.adam_epsilon;
  t.early_stop_patience = train.early_stop_patience;
  t.validation_fraction = train.validation_fraction;
  return t;
}

eval::EvalConfig RunConfig::eval_config() const {
  eval::EvalConfig e;
  e.tasks.n_tasks = eval.n_tasks;
  e.tasks.mode = eval.mode;
  e.tasks.seed = eval.seed;
  e.tasks.nonce_words = eval.nonce_words;
  e.runs = eval.runs;
  return e;
}

std::string data_dir() {
  if (const char* env = std::getenv("VGROUND_DATA_DIR"); env && *env) return env;
  return VGROUND_DEFAULT_DATA_DIR;
}

std::string default_templates_path() { return data_dir() + "/templates.txt"; }
std::string default_verbs_path() { return data_dir() + "/verbs.txt"; }

std::string output_path(const std::string& path) {
  const char* root = std::getenv("VGROUND_OUTPUT_ROOT");
  if (!root || !*root || std::filesystem::path(path).is_absolute()) return path;
  std::filesystem::create_directories(root);
  return (std::filesystem::path(root) / path).string();
}

}  // namespace vground::cli
