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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "vground/dataset/commands.h"
#include "vground/dataset/split.h"
#include "vground/dataset/synth.h"
#include "vground/eval/retrieval.h"
#include "vground/eval/sweep.h"
#include "vground/train/checkpoint.h"
#include "vground/train/trainer.h"
#include "vground/util/error.h"
#include "vground/util/rng.h"

using namespace vground;
using namespace vground::eval;
using nlohmann::json;

namespace {

std::vector<dataset::CommandTemplate> shipped_templates() {
  return dataset::load_templates(std::string(VGROUND_SHIPPED_DATA_DIR) + "/templates.txt");
}

struct Fixture {
  dataset::SynthData data;
  dataset::SplitManifest manifest;
  dataset::PairSet pairs;
  dataset::FeatureStore test_store{1};
  std::vector<dataset::CommandTemplate> templates = shipped_templates();

  Fixture() : data(dataset::synth_features(spec())) {
    manifest = dataset::split_by_object(data.pairs, 0.3, 2);
    pairs = dataset::PairSet(manifest.all_pairs());
    test_store = data.store.subset(manifest.test_classes);
  }

  static dataset::SynthSpec spec() {
    dataset::SynthSpec s;
    s.n_verbs = 8;
    s.n_classes = 30;
    s.instances_per_class = 4;
    s.dim = 16;
    s.seed = 6;
    return s;
  }
};

train::ModelCheckpoint tiny_model(const Fixture& f, std::size_t epochs = 2) {
  const auto samples =
      dataset::generate_training_set(f.manifest, f.templates, f.data.store, 200, 1);
  train::TrainConfig c;
  c.epochs = epochs;
  c.lr = 1e-3;
  c.word_dim = 8;
  c.hidden_dim = 12;
  c.output_dim = 16;
  return train::train(c, samples);
}

RetrievalTask one_gold_task() {
  RetrievalTask t;
  t.verb = "cut";
  for (std::uint32_t i = 0; i < kCandidates; ++i) t.candidates.push_back({"c" + std::to_string(i), i});
  t.gold_indices = {2};
  return t;
}

}  // namespace

TEST_CASE("generate_tasks is deterministic and sound") {
  const Fixture f;
  TaskConfig tc;
  tc.n_tasks = 300;
  tc.seed = 4;
  const auto tasks = generate_tasks(f.manifest.test_pairs, f.pairs, f.test_store, f.templates, tc);
  CHECK(tasks_to_jsonl(tasks) ==
        tasks_to_jsonl(generate_tasks(f.manifest.test_pairs, f.pairs, f.test_store, f.templates, tc)));
  tc.seed = 5;
  CHECK(tasks_to_jsonl(tasks) !=
        tasks_to_jsonl(generate_tasks(f.manifest.test_pairs, f.pairs, f.test_store, f.templates, tc)));
  REQUIRE(tasks.size() == 300);
  for (const auto& t : tasks) {
    REQUIRE(t.candidates.size() == kCandidates);
    std::set<std::string> classes;
    for (const auto& c : t.candidates) classes.insert(c.object_class);
    CHECK(classes.size() == kCandidates);
    REQUIRE(t.gold_indices.size() == 1);
    CHECK(f.pairs.contains(t.verb, t.candidates[t.gold_indices[0]].object_class));
    for (std::size_t i = 0; i < kCandidates; ++i) {
      if (i == t.gold_indices[0]) continue;
      CHECK_FALSE(f.pairs.contains(t.verb, t.candidates[i].object_class));
    }
    CHECK(std::find(t.command_tokens.begin(), t.command_tokens.end(), t.verb) !=
          t.command_tokens.end());
  }
  const std::string line = tasks_to_jsonl(tasks).substr(0, tasks_to_jsonl(tasks).find('\n'));
  const json j = json::parse(line);
  CHECK(j.contains("candidates"));
  CHECK(j.contains("gold_indices"));
}

TEST_CASE("unknown-noun commands place a nonce word in the object slot") {
  const Fixture f;
  const std::vector<dataset::CommandTemplate> templ = {
      dataset::CommandTemplate("give me the {object} to {verb}")};
  const std::vector<dataset::VerbObjectPair> test = {{"verb00", "object00"}};
  dataset::PairSet pairs;
  pairs.insert({"verb00", "object00"});
  TaskConfig tc;
  tc.n_tasks = 5;
  tc.mode = dataset::CommandMode::kVerbUnknownNoun;
  tc.nonce_words = {"dax"};
  const auto tasks = generate_tasks(test, pairs, f.data.store, templ, tc);
  for (const auto& t : tasks) CHECK(t.command == "give me the dax to verb00");

  tc.nonce_words = {};
  for (const auto& t : generate_tasks(test, pairs, f.data.store, templ, tc)) {
    const std::string& noun = t.command_tokens[3];
    const std::set<std::string> defaults{"dax", "blicket", "wug", "toma", "fep"};
    CHECK(defaults.count(noun) == 1);
  }
}

TEST_CASE("generate_tasks reports unusable inputs") {
  const Fixture f;
  TaskConfig tc;
  tc.n_tasks = 5;
  // verb00 pairs with every class of this tiny store.
  dataset::FeatureStore store(4);
  dataset::PairSet pairs;
  for (int c = 0; c < 5; ++c) {
    const std::string cls = "k" + std::to_string(c);
    store.add({{cls, 0}, {1, float(c), 0, 1}});
    pairs.insert({"slice", cls});
  }
  const std::vector<dataset::VerbObjectPair> test = {{"slice", "k0"}};
  try {
    generate_tasks(test, pairs, store, f.templates, tc);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("'slice'") != std::string::npos);
  }
  CHECK_THROWS_AS(generate_tasks(test, pairs, store.subset(std::vector<std::string>{"k0", "k1"}),
                                 f.templates, tc),
                  DataError);
  const std::vector<dataset::VerbObjectPair> stranger = {{"slice", "k9"}};
  CHECK_THROWS_AS(generate_tasks(stranger, pairs, store, f.templates, tc), DataError);
  const std::vector<dataset::CommandTemplate> noun_only = {
      dataset::CommandTemplate("the {object} to {verb}")};
  CHECK_THROWS_AS(generate_tasks(f.manifest.test_pairs, f.pairs, f.test_store, noun_only, tc),
                  DataError);
}

TEST_CASE("ranking examples") {
  const std::vector<float> cmd{1, 2, 3};
  const std::vector<std::vector<float>> feats{{-1, 0, 0}, {0, 1, 0}, {1, 2, 3}, {3, 2, 1}, {0, 0, 1}};
  std::vector<double> sims;
  const auto order = rank_by_similarity(cmd, feats, &sims);
  CHECK(order[0] == 2);
  CHECK(sims[2] == doctest::Approx(1.0));
  CHECK(order.back() == 0);

  const std::vector<std::vector<float>> ties{{1, 0, 0}, {0, 1, 0}, {1, 0, 0}, {0, 0, 1}, {2, 0, 0}};
  const auto tie_order = rank_by_similarity(std::vector<float>{1, 0, 0}, ties);
  CHECK(std::vector<std::size_t>(tie_order.begin(), tie_order.begin() + 3) ==
        std::vector<std::size_t>{0, 2, 4});
}

TEST_CASE("property: ranking is invariant to positive scaling of features") {
  Rng rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<float> cmd(6);
    for (auto& v : cmd) v = static_cast<float>(rng.normal());
    std::vector<std::vector<float>> feats(kCandidates, std::vector<float>(6));
    for (auto& f : feats) {
      for (auto& v : f) v = static_cast<float>(rng.normal());
    }
    auto scaled = feats;
    for (auto& f : scaled) {
      for (auto& v : f) v *= 3.0f;
    }
    CHECK(rank_by_similarity(cmd, feats) == rank_by_similarity(cmd, scaled));
  }
}

TEST_CASE("topk_accuracy examples and errors") {
  const RetrievalTask t = one_gold_task();
  const std::vector<RetrievalTask> tasks{t, t};
  const std::vector<std::vector<std::size_t>> rankings{{2, 0, 1, 3, 4}, {0, 2, 1, 3, 4}};
  CHECK(topk_accuracy(rankings, tasks, 1) == doctest::Approx(50.0));
  CHECK(topk_accuracy(rankings, tasks, 2) == doctest::Approx(100.0));
  CHECK(topk_accuracy(rankings, tasks, 5) == doctest::Approx(100.0));
  CHECK_THROWS_AS(topk_accuracy(rankings, tasks, 0), DataError);
  CHECK_THROWS_AS(topk_accuracy(rankings, tasks, 6), DataError);
  CHECK_THROWS_AS(topk_accuracy(std::vector<std::vector<std::size_t>>{rankings[0]}, tasks, 1),
                  DataError);
  CHECK_THROWS_AS(topk_accuracy(std::vector<std::vector<std::size_t>>{},
                                std::vector<RetrievalTask>{}, 1),
                  DataError);
}

TEST_CASE("property: top-2 accuracy never falls below top-1") {
  Rng rng(12);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(10);
    std::vector<RetrievalTask> tasks;
    std::vector<std::vector<std::size_t>> rankings;
    for (std::size_t i = 0; i < n; ++i) {
      RetrievalTask t = one_gold_task();
      t.gold_indices = {rng.uniform_index(kCandidates)};
      tasks.push_back(t);
      std::vector<std::size_t> r(kCandidates);
      std::iota(r.begin(), r.end(), std::size_t{0});
      rng.shuffle(r.begin(), r.end());
      rankings.push_back(r);
    }
    CHECK(topk_accuracy(rankings, tasks, 2) >= topk_accuracy(rankings, tasks, 1));
  }
}

TEST_CASE("standard_error uses the sample standard deviation") {
  const std::vector<double> runs{80, 82, 78, 84, 76};
  // deviations 0, 2, -2, 4, -4: variance 40 / 4 = 10.
  CHECK(standard_error(runs) == doctest::Approx(std::sqrt(10.0) / std::sqrt(5.0)));
  CHECK(standard_error(std::vector<double>{42.0}) == 0.0);
  CHECK(standard_error(std::vector<double>{5, 5, 5}) == 0.0);
}

TEST_CASE("random baseline: exhaustive ranking enumeration gives 20 and 40") {
  const RetrievalTask t = one_gold_task();
  std::vector<std::size_t> perm(kCandidates);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::vector<std::vector<std::size_t>> rankings;
  std::vector<RetrievalTask> tasks;
  do {
    rankings.push_back(perm);
    tasks.push_back(t);
  } while (std::next_permutation(perm.begin(), perm.end()));
  REQUIRE(rankings.size() == 120);
  CHECK(topk_accuracy(rankings, tasks, 1) == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(topk_accuracy(rankings, tasks, 2) == doctest::Approx(40.0).epsilon(1e-12));

  const auto analytic = analytic_random_baseline(std::vector<RetrievalTask>{t});
  CHECK(analytic.top1 == doctest::Approx(20.0));
  CHECK(analytic.top2 == doctest::Approx(40.0));
  const auto mc = random_baseline(std::vector<RetrievalTask>{t}, 10000, 9);
  CHECK(std::abs(mc.top1 - 20.0) <= 2.0);
  CHECK(std::abs(mc.top2 - 40.0) <= 2.0);
}

TEST_CASE("run_eval report fields, determinism and config echo") {
  const Fixture f;
  const auto model = tiny_model(f);
  EvalConfig ec;
  ec.tasks.n_tasks = 40;
  ec.runs = 3;
  ec.tasks.seed = 1;
  const auto r = run_eval(model, f.manifest.test_pairs, f.pairs, f.test_store, f.templates, ec);
  CHECK(r.n_tasks == 40);
  CHECK(r.runs == 3);
  CHECK(r.top1_runs.size() == 3);
  CHECK(r.top2_mean >= r.top1_mean);
  CHECK(r.top1_se == doctest::Approx(standard_error(r.top1_runs)));
  std::size_t pooled = 0;
  for (const auto& [verb, s] : r.per_verb) pooled += s.n;
  CHECK(pooled == 120);
  const json j = json::parse(r.dump());
  for (const char* key : {"top1_mean", "top1_se", "top2_mean", "top2_se", "per_verb", "config",
                          "config_fingerprint"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["config"].contains("checkpoint"));
  CHECK(r.dump() ==
        run_eval(model, f.manifest.test_pairs, f.pairs, f.test_store, f.templates, ec).dump());

  ec.runs = 1;
  const auto single = run_eval(model, f.manifest.test_pairs, f.pairs, f.test_store, f.templates, ec);
  CHECK(single.top1_se == 0.0);
  ec.runs = 0;
  CHECK_THROWS_AS(run_eval(model, f.manifest.test_pairs, f.pairs, f.test_store, f.templates, ec),
                  ConfigError);
}

TEST_CASE("evaluation does not modify the checkpoint") {
  const Fixture f;
  const auto model = tiny_model(f);
  const std::string before = train::serialize_checkpoint(model);
  EvalConfig ec;
  ec.tasks.n_tasks = 20;
  ec.runs = 2;
  run_eval(model, f.manifest.test_pairs, f.pairs, f.test_store, f.templates, ec);
  CHECK(train::serialize_checkpoint(model) == before);
}

TEST_CASE("cross_dataset_eval checks dims and verbs") {
  const Fixture f;
  const auto model = tiny_model(f);
  EvalConfig ec;
  ec.tasks.n_tasks = 20;
  ec.runs = 2;
  const auto ok = cross_dataset_eval(model, f.test_store, f.manifest.test_pairs, f.templates, ec);
  CHECK(ok.runs == 2);

  dataset::FeatureStore wide(17);
  wide.add({{"object00", 0}, std::vector<float>(17, 1.0f)});
  CHECK_THROWS_AS(cross_dataset_eval(model, wide, f.manifest.test_pairs, f.templates, ec), DataError);

  std::vector<dataset::VerbObjectPair> alien = f.manifest.test_pairs;
  alien.push_back({"juggle", alien[0].object_class});
  try {
    cross_dataset_eval(model, f.test_store, alien, f.templates, ec);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("juggle") != std::string::npos);
  }
}

TEST_CASE("sweep CSV layout") {
  SweepReport rep;
  rep.random = {20.0, 40.0};
  SweepRow row;
  row.data_size = 100;
  row.report.top1_mean = 61.5;
  row.report.top1_se = 1.25;
  row.report.top2_mean = 80.0;
  row.report.top2_se = 0.5;
  rep.rows.push_back(row);
  std::istringstream in(rep.to_csv());
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "model,top1,top1_se,top2,top2_se");
  CHECK(lines[1].rfind("Random,20", 0) == 0);
  CHECK(lines[2].rfind("Data size 100,61.5", 0) == 0);
  CHECK(lines[3].rfind("Human baseline,78", 0) == 0);
  CHECK(lines[3].find("1.72") != std::string::npos);
}

TEST_CASE("data size sweep on synthetic data does not degrade with more data") {
  dataset::SynthSpec spec;
  spec.dim = 32;
  const auto data = dataset::synth_features(spec);
  const auto manifest = dataset::split_by_object(data.pairs, 0.2, 0);
  const auto templates = shipped_templates();
  SweepConfig sc;
  sc.sizes = {100, 400, 1600};
  sc.build_seed = 1;
  sc.train.epochs = 10;
  sc.train.lr = 1e-3;
  sc.train.word_dim = 16;
  sc.train.hidden_dim = 32;
  sc.train.output_dim = 32;
  sc.eval.tasks.n_tasks = 100;
  sc.eval.runs = 3;
  const auto rep = data_size_sweep(manifest, templates, templates, data.store, sc);
  REQUIRE(rep.rows.size() == 3);
  CHECK(rep.rows[2].report.top1_mean >= rep.rows[0].report.top1_mean - 5.0);
  CHECK(rep.random.top1 == doctest::Approx(20.0));

  sc.sizes = {400, 100};
  CHECK_THROWS_AS(data_size_sweep(manifest, templates, templates, data.store, sc), ConfigError);
}
