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

#include "vground/eval/sweep.h"

#include <cstdio>

#include "vground/dataset/sampling.h"
#include "vground/util/error.h"

namespace vground::eval {
namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string SweepReport::to_csv() const {
  std::string out = "model,top1,top1_se,top2,top2_se\n";
  out += "Random," + fixed(random.top1, 1) + ",," + fixed(random.top2, 1) + ",\n";
  for (const auto& row : rows) {
    const EvalReport& r = row.report;
    out += "Data size " + std::to_string(row.data_size) + "," + fixed(r.top1_mean, 1) + "," +
           fixed(r.top1_se, 2) + "," + fixed(r.top2_mean, 1) + "," + fixed(r.top2_se, 2) + "\n";
  }
  out += "Human baseline," + fixed(kHumanTop1, 1) + "," + fixed(kHumanTop1Se, 2) + ",,\n";
  return out;
}

std::string SweepReport::to_json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json r = row.report.to_json();
    r["data_size"] = row.data_size;
    rows_json.push_back(std::move(r));
  }
  nlohmann::json j{{"random", {{"top1", random.top1}, {"top2", random.top2}}},
                   {"human", {{"top1", kHumanTop1}, {"top1_se", kHumanTop1Se}}},
                   {"rows", rows_json}};
  return j.dump(2) + "\n";
}

SweepReport data_size_sweep(const dataset::SplitManifest& manifest,
                            std::span<const dataset::CommandTemplate> train_templates,
                            std::span<const dataset::CommandTemplate> eval_templates,
                            const dataset::FeatureStore& store, const SweepConfig& config,
                            const SweepProgress& progress) {
  if (config.sizes.empty()) throw ConfigError("sweep needs at least one data size");
  for (std::size_t i = 1; i < config.sizes.size(); ++i) {
    if (config.sizes[i] <= config.sizes[i - 1]) {
      throw ConfigError("sweep sizes must be strictly ascending");
    }
  }
  const dataset::FeatureStore test_store = store.subset(manifest.test_classes);
  const dataset::PairSet pairs(manifest.all_pairs());

  SweepReport report;
  TaskConfig first = config.eval.tasks;
  first.seed = derive_seed(config.eval.tasks.seed, 0);
  report.random = analytic_random_baseline(
      generate_tasks(manifest.test_pairs, pairs, test_store, eval_templates, first));

  for (std::size_t size : config.sizes) {
    const auto samples = dataset::generate_training_set(manifest, train_templates, store, size,
                                                        config.build_seed, config.train_mode);
    const train::ModelCheckpoint ckpt = train::train(config.train, samples);
    SweepRow row{size, run_eval(ckpt, manifest.test_pairs, pairs, test_store, eval_templates,
                                config.eval)};
    if (progress) progress(row);
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace vground::eval
