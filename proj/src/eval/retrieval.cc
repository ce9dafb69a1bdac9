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

#include "vground/eval/retrieval.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "vground/core/cosine.h"
#include "vground/train/checkpoint.h"
#include "vground/util/error.h"
#include "vground/util/hash.h"
#include "vground/util/rng.h"

namespace vground::eval {
namespace {

using nlohmann::json;

std::vector<std::string> default_nonces() {
  const auto words = dataset::default_nonce_words();
  return {words.begin(), words.end()};
}

}  // namespace

json RetrievalTask::to_json() const {
  json cands = json::array();
  for (const auto& ref : candidates) {
    cands.push_back(json{{"object_class", ref.object_class}, {"instance_id", ref.instance_id}});
  }
  return json{{"verb", verb},
              {"command", command},
              {"command_tokens", command_tokens},
              {"candidates", cands},
              {"gold_indices", gold_indices}};
}

json TaskConfig::to_json() const {
  return json{{"n_tasks", n_tasks},
              {"mode", dataset::to_string(mode)},
              {"seed", seed},
              {"nonce_words", nonce_words.empty() ? default_nonces() : nonce_words}};
}

std::vector<RetrievalTask> generate_tasks(std::span<const dataset::VerbObjectPair> test_pairs,
                                          const dataset::PairSet& pairs,
                                          const dataset::FeatureStore& store,
                                          std::span<const dataset::CommandTemplate> templates,
                                          const TaskConfig& config) {
  if (test_pairs.empty()) throw DataError("no test pairs to build retrieval tasks from");
  const std::vector<std::string> classes = store.classes();
  if (classes.size() < kCandidates) {
    throw DataError("retrieval tasks need at least 5 object classes in the store, found " +
                    std::to_string(classes.size()));
  }
  const std::vector<dataset::CommandTemplate> usable = dataset::templates_for(templates, config.mode);
  if (usable.empty()) {
    throw DataError(std::string("no template applies to mode ") + dataset::to_string(config.mode));
  }
  const std::vector<std::string> nonces =
      config.nonce_words.empty() ? default_nonces() : config.nonce_words;

  // Validate every pair up front so errors do not depend on the draw.
  std::map<std::string, std::vector<std::string>> distractors;
  for (const auto& p : test_pairs) {
    if (!store.has_class(p.object_class)) {
      throw DataError("test class '" + p.object_class + "' has no instance in the feature store");
    }
    if (!pairs.contains(p.verb, p.object_class)) {
      throw DataError("test pair (" + p.verb + ", " + p.object_class + ") missing from pair set");
    }
    if (distractors.count(p.verb)) continue;
    std::vector<std::string> eligible;
    for (const auto& c : classes) {
      if (!pairs.contains(p.verb, c)) eligible.push_back(c);
    }
    if (eligible.size() < kCandidates - 1) {
      throw DataError("verb '" + p.verb + "' has only " + std::to_string(eligible.size()) +
                      " distractor classes, need 4");
    }
    distractors.emplace(p.verb, std::move(eligible));
  }

  Rng rng(config.seed);
  std::vector<RetrievalTask> tasks;
  tasks.reserve(config.n_tasks);
  for (std::size_t t = 0; t < config.n_tasks; ++t) {
    const dataset::VerbObjectPair& pair = test_pairs[rng.uniform_index(test_pairs.size())];
    auto pick_instance = [&](const std::string& cls) {
      const auto& idx = store.instances_of(cls);
      return store.record(idx[rng.uniform_index(idx.size())]).ref;
    };
    std::vector<dataset::ObjectRef> cands{pick_instance(pair.object_class)};
    std::vector<std::string> pool = distractors.at(pair.verb);
    for (std::size_t k = 0; k + 1 < kCandidates; ++k) {
      const std::size_t j = k + rng.uniform_index(pool.size() - k);
      std::swap(pool[k], pool[j]);
      cands.push_back(pick_instance(pool[k]));
    }
    rng.shuffle(cands.begin(), cands.end());

    const dataset::CommandTemplate& tmpl = usable[rng.uniform_index(usable.size())];
    std::string object;
    if (config.mode == dataset::CommandMode::kVerbNoun) {
      object = pair.object_class;
    } else if (config.mode == dataset::CommandMode::kVerbUnknownNoun) {
      object = nonces[rng.uniform_index(nonces.size())];
    }

    RetrievalTask task;
    task.verb = pair.verb;
    task.command = tmpl.render(pair.verb, object);
    task.command_tokens = dataset::tokenize(task.command);
    task.candidates = std::move(cands);
    for (std::size_t i = 0; i < kCandidates; ++i) {
      if (pairs.contains(pair.verb, task.candidates[i].object_class)) task.gold_indices.push_back(i);
    }
    tasks.push_back(std::move(task));
  }
  return tasks;
}

std::vector<std::size_t> rank_by_similarity(std::span<const float> command,
                                            std::span<const std::vector<float>> features,
                                            std::vector<double>* similarities) {
  std::vector<double> sims;
  sims.reserve(features.size());
  for (const auto& f : features) {
    sims.push_back(core::cosine_similarity(command, std::span<const float>(f)));
  }
  std::vector<std::size_t> order(features.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sims[a] > sims[b]; });
  if (similarities) *similarities = std::move(sims);
  return order;
}

std::vector<std::size_t> rank_candidates(const train::ModelCheckpoint& ckpt,
                                         const RetrievalTask& task,
                                         const dataset::FeatureStore& store,
                                         std::vector<double>* similarities) {
  std::vector<std::vector<float>> features;
  for (const auto& ref : task.candidates) features.push_back(store.at(ref).values);
  const std::vector<float> emb = ckpt.embed(task.command_tokens);
  return rank_by_similarity(emb, features, similarities);
}

double topk_accuracy(std::span<const std::vector<std::size_t>> rankings,
                     std::span<const RetrievalTask> tasks, std::size_t k) {
  if (rankings.size() != tasks.size()) {
    throw DataError("topk_accuracy: " + std::to_string(rankings.size()) + " rankings for " +
                    std::to_string(tasks.size()) + " tasks");
  }
  if (k < 1 || k > kCandidates) throw DataError("topk_accuracy: k must lie in [1, 5]");
  if (tasks.empty()) throw DataError("topk_accuracy: no tasks");
  std::size_t hits = 0;
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    const auto& gold = tasks[t].gold_indices;
    const std::size_t depth = std::min(k, rankings[t].size());
    for (std::size_t i = 0; i < depth; ++i) {
      if (std::find(gold.begin(), gold.end(), rankings[t][i]) != gold.end()) {
        ++hits;
        break;
      }
    }
  }
  return 100.0 * static_cast<double>(hits) / static_cast<double>(tasks.size());
}

double standard_error(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n));
}

json EvalConfig::to_json() const {
  json j = tasks.to_json();
  j["runs"] = runs;
  return j;
}

json EvalReport::to_json() const {
  json verbs = json::object();
  for (const auto& [verb, s] : per_verb) {
    verbs[verb] = json{{"top1", s.top1}, {"top2", s.top2}, {"n", s.n}};
  }
  return json{{"n_tasks", n_tasks},
              {"runs", runs},
              {"top1_mean", top1_mean},
              {"top1_se", top1_se},
              {"top2_mean", top2_mean},
              {"top2_se", top2_se},
              {"top1_runs", top1_runs},
              {"top2_runs", top2_runs},
              {"per_verb", verbs},
              {"config", config},
              {"config_fingerprint", config_fingerprint}};
}

std::string EvalReport::dump() const { return to_json().dump(2) + "\n"; }

EvalReport run_eval(const train::ModelCheckpoint& ckpt,
                    std::span<const dataset::VerbObjectPair> test_pairs,
                    const dataset::PairSet& pairs, const dataset::FeatureStore& store,
                    std::span<const dataset::CommandTemplate> templates,
                    const EvalConfig& config) {
  if (config.runs < 1) throw ConfigError("eval.runs must be >= 1");
  if (config.tasks.n_tasks < 1) throw ConfigError("eval.n_tasks must be >= 1");
  if (store.dim() != ckpt.params.dims.output_dim) {
    throw DataError("feature dim " + std::to_string(store.dim()) + " does not match model dim " +
                    std::to_string(ckpt.params.dims.output_dim));
  }

  EvalReport report;
  report.n_tasks = config.tasks.n_tasks;
  report.runs = config.runs;
  std::map<std::string, std::pair<std::size_t, std::size_t>> verb_hits;  // top1, top2
  for (std::size_t run = 0; run < config.runs; ++run) {
    TaskConfig tc = config.tasks;
    tc.seed = derive_seed(config.tasks.seed, run);
    const std::vector<RetrievalTask> tasks = generate_tasks(test_pairs, pairs, store, templates, tc);
    std::vector<std::vector<std::size_t>> rankings;
    rankings.reserve(tasks.size());
    for (const auto& task : tasks) {
      rankings.push_back(rank_candidates(ckpt, task, store));
      const auto& gold = task.gold_indices;
      auto is_gold = [&](std::size_t i) {
        return std::find(gold.begin(), gold.end(), i) != gold.end();
      };
      VerbScore& vs = report.per_verb[task.verb];
      auto& hits = verb_hits[task.verb];
      ++vs.n;
      if (is_gold(rankings.back()[0])) ++hits.first;
      if (is_gold(rankings.back()[0]) || is_gold(rankings.back()[1])) ++hits.second;
    }
    report.top1_runs.push_back(topk_accuracy(rankings, tasks, 1));
    report.top2_runs.push_back(topk_accuracy(rankings, tasks, 2));
  }
  for (auto& [verb, vs] : report.per_verb) {
    vs.top1 = 100.0 * static_cast<double>(verb_hits[verb].first) / static_cast<double>(vs.n);
    vs.top2 = 100.0 * static_cast<double>(verb_hits[verb].second) / static_cast<double>(vs.n);
  }
  auto mean = [](const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  };
  report.top1_mean = mean(report.top1_runs);
  report.top2_mean = mean(report.top2_runs);
  report.top1_se = standard_error(report.top1_runs);
  report.top2_se = standard_error(report.top2_runs);

  json templ = json::array();
  for (const auto& t : templates) templ.push_back(t.pattern());
  report.config = json{{"eval", config.to_json()},
                       {"train", ckpt.config.to_json()},
                       {"templates", templ},
                       {"checkpoint", train::checkpoint_fingerprint(ckpt)},
                       {"features", hex64(fnv1a64(store.serialize()))}};
  report.config_fingerprint = hex64(fnv1a64(report.config.dump()));
  return report;
}

EvalReport cross_dataset_eval(const train::ModelCheckpoint& ckpt,
                              const dataset::FeatureStore& external_store,
                              std::span<const dataset::VerbObjectPair> external_pairs,
                              std::span<const dataset::CommandTemplate> templates,
                              const EvalConfig& config) {
  if (external_store.dim() != ckpt.params.dims.output_dim) {
    throw DataError("external feature dim " + std::to_string(external_store.dim()) +
                    " does not match model dim " + std::to_string(ckpt.params.dims.output_dim));
  }
  std::string unknown;
  for (const auto& verb : dataset::verbs_of(external_pairs)) {
    if (!ckpt.vocab.contains(verb)) unknown += (unknown.empty() ? "" : ", ") + verb;
  }
  if (!unknown.empty()) throw DataError("verbs not in the model vocabulary: " + unknown);
  const dataset::PairSet pairs(external_pairs);
  return run_eval(ckpt, external_pairs, pairs, external_store, templates, config);
}

BaselineScores analytic_random_baseline(std::span<const RetrievalTask> tasks) {
  if (tasks.empty()) throw DataError("random baseline needs at least one task");
  BaselineScores s;
  for (const auto& t : tasks) {
    const double n = static_cast<double>(t.candidates.size());
    const double g = static_cast<double>(t.gold_indices.size());
    s.top1 += g / n;
    s.top2 += 1.0 - ((n - g) * (n - g - 1.0)) / (n * (n - 1.0));
  }
  s.top1 *= 100.0 / static_cast<double>(tasks.size());
  s.top2 *= 100.0 / static_cast<double>(tasks.size());
  return s;
}

BaselineScores random_baseline(std::span<const RetrievalTask> tasks, std::size_t trials,
                               std::uint64_t seed) {
  if (tasks.empty()) throw DataError("random baseline needs at least one task");
  if (trials < 1) throw ConfigError("random baseline needs trials >= 1");
  Rng rng(seed);
  std::size_t top1 = 0, top2 = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    const RetrievalTask& t = tasks[i % tasks.size()];
    std::vector<std::size_t> perm(t.candidates.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    rng.shuffle(perm.begin(), perm.end());
    auto is_gold = [&](std::size_t c) {
      return std::find(t.gold_indices.begin(), t.gold_indices.end(), c) != t.gold_indices.end();
    };
    if (is_gold(perm[0])) ++top1;
    if (is_gold(perm[0]) || (perm.size() > 1 && is_gold(perm[1]))) ++top2;
  }
  const double scale = 100.0 / static_cast<double>(trials);
  return {scale * static_cast<double>(top1), scale * static_cast<double>(top2)};
}

std::string tasks_to_jsonl(std::span<const RetrievalTask> tasks) {
  std::string out;
  for (const auto& t : tasks) out += t.to_json().dump() + "\n";
  return out;
}

}  // namespace vground::eval
