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

#ifndef VGROUND_EVAL_SWEEP_H_
#define VGROUND_EVAL_SWEEP_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "vground/dataset/split.h"
#include "vground/eval/retrieval.h"
#include "vground/train/trainer.h"

namespace vground::eval {

// Reported human top-1 accuracy and standard error on the 5-candidate
// task, carried into sweep tables for comparison.
inline constexpr double kHumanTop1 = 78.0;
inline constexpr double kHumanTop1Se = 1.72;

struct SweepConfig {
  std::vector<std::size_t> sizes;  // positive samples per model, ascending
  std::uint64_t build_seed = 0;
  dataset::CommandMode train_mode = dataset::CommandMode::kVerbOnly;
  train::TrainConfig train;
  EvalConfig eval;
};

struct SweepRow {
  std::size_t data_size = 0;
  EvalReport report;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  BaselineScores random;  // analytic, over the first run's task set

  // Columns: model,top1,top1_se,top2,top2_se. First row "Random", then
  // one "Data size N" row per size, then "Human baseline".
  std::string to_csv() const;
  std::string to_json() const;
};

using SweepProgress = std::function<void(const SweepRow&)>;

// For every size: generate_training_set -> train -> run_eval. The eval
// seed is the same for every size, so all models see the same tasks.
SweepReport data_size_sweep(const dataset::SplitManifest& manifest,
                            std::span<const dataset::CommandTemplate> train_templates,
                            std::span<const dataset::CommandTemplate> eval_templates,
                            const dataset::FeatureStore& store, const SweepConfig& config,
                            const SweepProgress& progress = {});

}  // namespace vground::eval

#endif  // VGROUND_EVAL_SWEEP_H_
