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

#ifndef VGROUND_DATASET_SAMPLING_H_
#define VGROUND_DATASET_SAMPLING_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vground/dataset/commands.h"
#include "vground/dataset/feature_store.h"
#include "vground/dataset/pairs.h"
#include "vground/dataset/split.h"
#include "vground/util/rng.h"

namespace vground::dataset {

// One command/feature pair with a +1 (usable) or -1 (not usable) label.
// Token ids are assigned later by the trainer's vocabulary.
struct TrainingSample {
  std::vector<std::string> tokens;
  std::string verb;
  ObjectRef object;
  std::vector<float> feature;
  int label = 1;

  friend bool operator==(const TrainingSample&, const TrainingSample&) = default;
};

// Draws features of classes that do not pair with a verb, uniformly over
// all their instances. Eligible instance lists are cached per verb.
class NegativeSampler {
 public:
  NegativeSampler(const PairSet& pairs, const FeatureStore& store);

  // Throws DataError when every class in the store pairs with `verb`.
  const FeatureRecord& sample(const std::string& verb, Rng& rng);

 private:
  const std::vector<std::size_t>& eligible(const std::string& verb);

  const PairSet& pairs_;
  const FeatureStore& store_;
  std::map<std::string, std::vector<std::size_t>> cache_;
};

const FeatureRecord& negative_sample(const std::string& verb, const PairSet& pairs,
                                     const FeatureStore& store, Rng& rng);

// Builds target_size positives and target_size negatives from the train
// side of `manifest`, then shuffles them.
//
// Each train pair is used floor(target/n) or ceil(target/n) times (which
// pairs get the extra use is seeded). Every use renders a random applicable
// template and takes a random instance of the pair's class; its negative
// reuses the same command with negative_sample(). Only train classes of
// `store` are ever read.
std::vector<TrainingSample> generate_training_set(const SplitManifest& manifest,
                                                  std::span<const CommandTemplate> templates,
                                                  const FeatureStore& store,
                                                  std::size_t target_size, std::uint64_t seed,
                                                  CommandMode mode = CommandMode::kVerbOnly);

// "VGSMPL01" | u32 dim | u32 count | per sample:
//   i8 label | u16+bytes verb | u16+bytes class | u32 instance |
//   u16 n_tokens | n x (u16+bytes token) | dim x f32
std::string serialize_samples(std::span<const TrainingSample> samples);
std::vector<TrainingSample> deserialize_samples(std::string_view bytes);
void save_samples(const std::string& path, std::span<const TrainingSample> samples);
std::vector<TrainingSample> load_samples(const std::string& path);

}  // namespace vground::dataset

#endif  // VGROUND_DATASET_SAMPLING_H_
