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

#ifndef VGROUND_EVAL_RETRIEVAL_H_
#define VGROUND_EVAL_RETRIEVAL_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "vground/dataset/commands.h"
#include "vground/dataset/feature_store.h"
#include "vground/dataset/pairs.h"
#include "vground/train/trainer.h"

namespace vground::eval {

inline constexpr std::size_t kCandidates = 5;

// One command and five candidate objects of distinct classes. Exactly the
// candidates in gold_indices pair with the verb.
struct RetrievalTask {
  std::string verb;
  std::string command;
  std::vector<std::string> command_tokens;
  std::vector<dataset::ObjectRef> candidates;
  std::vector<std::size_t> gold_indices;

  nlohmann::json to_json() const;
};

struct TaskConfig {
  std::size_t n_tasks = 200;
  dataset::CommandMode mode = dataset::CommandMode::kVerbOnly;
  std::uint64_t seed = 0;
  // Object-slot words for kVerbUnknownNoun; defaults to the shipped list.
  std::vector<std::string> nonce_words;

  nlohmann::json to_json() const;
};

// Samples n_tasks tasks: a uniform test pair, a uniform instance of its
// class, four instances of distinct store classes that do not pair with the
// verb (per `pairs`), shuffled positions and a random applicable template.
// Throws DataError naming the verb when fewer than four such classes
// exist, and when a test pair's class has no instance in the store.
std::vector<RetrievalTask> generate_tasks(std::span<const dataset::VerbObjectPair> test_pairs,
                                          const dataset::PairSet& pairs,
                                          const dataset::FeatureStore& store,
                                          std::span<const dataset::CommandTemplate> templates,
                                          const TaskConfig& config);

// Candidate indices by descending cosine to `command`, ties by index.
std::vector<std::size_t> rank_by_similarity(std::span<const float> command,
                                            std::span<const std::vector<float>> features,
                                            std::vector<double>* similarities = nullptr);

// Ranks a task's candidates with the checkpoint's command embedding.
// Throws DataError when a candidate is missing from the store.
std::vector<std::size_t> rank_candidates(const train::ModelCheckpoint& ckpt,
                                         const RetrievalTask& task,
                                         const dataset::FeatureStore& store,
                                         std::vector<double>* similarities = nullptr);

// Percentage of tasks with a gold index among the first k of its ranking.
double topk_accuracy(std::span<const std::vector<std::size_t>> rankings,
                     std::span<const RetrievalTask> tasks, std::size_t k);

// Sample standard deviation (n - 1) over sqrt(n); 0 for n < 2.
double standard_error(std::span<const double> values);

struct VerbScore {
  double top1 = 0.0;
  double top2 = 0.0;
  std::size_t n = 0;
};

struct EvalConfig {
  TaskConfig tasks;
  std::size_t runs = 5;

  nlohmann::json to_json() const;
};

struct EvalReport {
  std::size_t n_tasks = 0;
  std::size_t runs = 0;
  double top1_mean = 0.0;
  double top1_se = 0.0;
  double top2_mean = 0.0;
  double top2_se = 0.0;
  std::vector<double> top1_runs;
  std::vector<double> top2_runs;
  std::map<std::string, VerbScore> per_verb;  // pooled over runs
  nlohmann::json config;
  std::string config_fingerprint;

  nlohmann::json to_json() const;
  // to_json().dump(2) plus a newline.
  std::string dump() const;
};

// Run r uses task seed derive_seed(config.tasks.seed, r), so each run
// draws a fresh task set. Never modifies the checkpoint.
EvalReport run_eval(const train::ModelCheckpoint& ckpt,
                    std::span<const dataset::VerbObjectPair> test_pairs,
                    const dataset::PairSet& pairs, const dataset::FeatureStore& store,
                    std::span<const dataset::CommandTemplate> templates,
                    const EvalConfig& config);

// Evaluates on features and pairs from another source with the same
// protocol. The store dim must equal the checkpoint's output dim and every
// verb must be in its vocabulary.
EvalReport cross_dataset_eval(const train::ModelCheckpoint& ckpt,
                              const dataset::FeatureStore& external_store,
                              std::span<const dataset::VerbObjectPair> external_pairs,
                              std::span<const dataset::CommandTemplate> templates,
                              const EvalConfig& config);

struct BaselineScores {
  double top1 = 0.0;
  double top2 = 0.0;
};

// Expected accuracies of a uniformly random ranking: with g gold of n
// candidates, top-1 = g/n and top-2 = 1 - C(n-g, 2)/C(n, 2), averaged.
BaselineScores analytic_random_baseline(std::span<const RetrievalTask> tasks);

// Monte Carlo estimate with `trials` random permutations, cycling through
// the tasks.
BaselineScores random_baseline(std::span<const RetrievalTask> tasks, std::size_t trials,
                               std::uint64_t seed);

// One JSON object per line.
std::string tasks_to_jsonl(std::span<const RetrievalTask> tasks);

}  // namespace vground::eval

#endif  // VGROUND_EVAL_RETRIEVAL_H_
