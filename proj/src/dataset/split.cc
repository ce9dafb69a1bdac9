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

#include "vground/dataset/split.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "json.hpp"
#include "vground/util/binio.h"
#include "vground/util/error.h"
#include "vground/util/rng.h"

namespace vground::dataset {
namespace {

using nlohmann::json;

json pairs_to_json(std::span<const VerbObjectPair> pairs) {
  json arr = json::array();
  for (const auto& p : pairs) arr.push_back({p.verb, p.object_class});
  return arr;
}

std::vector<VerbObjectPair> pairs_from_json(const json& arr) {
  std::vector<VerbObjectPair> out;
  for (const auto& item : arr) {
    if (!item.is_array() || item.size() != 2) {
      throw DataError("manifest pair must be a [verb, object] array");
    }
    out.push_back({item[0].get<std::string>(), item[1].get<std::string>()});
  }
  return out;
}

}  // namespace

std::vector<VerbObjectPair> SplitManifest::all_pairs() const {
  std::vector<VerbObjectPair> all = train_pairs;
  all.insert(all.end(), test_pairs.begin(), test_pairs.end());
  std::sort(all.begin(), all.end());
  return all;
}

std::string SplitManifest::to_json() const {
  json j;
  j["seed"] = seed;
  j["holdout_fraction"] = holdout_fraction;
  j["train_classes"] = train_classes;
  j["test_classes"] = test_classes;
  j["train_pairs"] = pairs_to_json(train_pairs);
  j["test_pairs"] = pairs_to_json(test_pairs);
  return j.dump(2) + "\n";
}

SplitManifest SplitManifest::from_json(std::string_view text) {
  SplitManifest m;
  try {
    const json j = json::parse(text);
    for (const auto& [key, value] : j.items()) {
      static const std::set<std::string> kKnown = {"seed",          "holdout_fraction",
                                                   "train_classes", "test_classes",
                                                   "train_pairs",   "test_pairs"};
      if (!kKnown.contains(key)) throw DataError("manifest: unknown field '" + key + "'");
    }
    m.seed = j.at("seed").get<std::uint64_t>();
    m.holdout_fraction = j.at("holdout_fraction").get<double>();
    m.train_classes = j.at("train_classes").get<std::vector<std::string>>();
    m.test_classes = j.at("test_classes").get<std::vector<std::string>>();
    m.train_pairs = pairs_from_json(j.at("train_pairs"));
    m.test_pairs = pairs_from_json(j.at("test_pairs"));
  } catch (const json::exception& e) {
    throw DataError(std::string("manifest: ") + e.what());
  }
  std::set<std::string> train(m.train_classes.begin(), m.train_classes.end());
  std::set<std::string> test(m.test_classes.begin(), m.test_classes.end());
  for (const auto& c : test) {
    if (train.contains(c)) throw DataError("manifest: class '" + c + "' is in both splits");
  }
  for (const auto& p : m.train_pairs) {
    if (!train.contains(p.object_class)) {
      throw DataError("manifest: train pair class '" + p.object_class + "' not in train_classes");
    }
  }
  for (const auto& p : m.test_pairs) {
    if (!test.contains(p.object_class)) {
      throw DataError("manifest: test pair class '" + p.object_class + "' not in test_classes");
    }
  }
  return m;
}

void SplitManifest::save(const std::string& path) const { write_file(path, to_json()); }

SplitManifest SplitManifest::load(const std::string& path) {
  try {
    return from_json(read_file(path));
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

std::size_t holdout_count(std::size_t n_classes, double holdout_fraction) {
  return static_cast<std::size_t>(std::llround(holdout_fraction * static_cast<double>(n_classes)));
}

SplitManifest split_by_object(std::span<const VerbObjectPair> pairs, double holdout_fraction,
                              std::uint64_t seed) {
  if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0)) {
    throw ConfigError("holdout_fraction must be in (0, 1), got " + std::to_string(holdout_fraction));
  }
  std::vector<std::string> classes = object_classes_of(pairs);
  if (classes.size() < 2) {
    throw DataError("split needs at least 2 object classes, got " + std::to_string(classes.size()));
  }
  const std::size_t n_test = holdout_count(classes.size(), holdout_fraction);
  if (n_test == 0 || n_test == classes.size()) {
    throw DataError("holdout " + std::to_string(holdout_fraction) + " of " +
                    std::to_string(classes.size()) + " classes leaves a split with no classes");
  }

  Rng rng(seed);
  rng.shuffle(classes.begin(), classes.end());

  SplitManifest m;
  m.seed = seed;
  m.holdout_fraction = holdout_fraction;
  m.test_classes.assign(classes.begin(), classes.begin() + static_cast<std::ptrdiff_t>(n_test));
  m.train_classes.assign(classes.begin() + static_cast<std::ptrdiff_t>(n_test), classes.end());
  std::sort(m.test_classes.begin(), m.test_classes.end());
  std::sort(m.train_classes.begin(), m.train_classes.end());

  const std::set<std::string> test(m.test_classes.begin(), m.test_classes.end());
  std::set<VerbObjectPair> unique(pairs.begin(), pairs.end());
  for (const auto& p : unique) {
    (test.contains(p.object_class) ? m.test_pairs : m.train_pairs).push_back(p);
  }
  return m;
}

}  // namespace vground::dataset
