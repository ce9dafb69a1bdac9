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

#ifndef VGROUND_DATASET_SYNTH_H_
#define VGROUND_DATASET_SYNTH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "vground/dataset/feature_store.h"
#include "vground/dataset/pairs.h"

namespace vground::dataset {

// Parameters of the clustered stand-in for CNN image features.
struct SynthSpec {
  std::size_t n_verbs = 10;
  std::size_t n_classes = 40;
  std::size_t instances_per_class = 20;
  std::uint32_t dim = 64;
  double cluster_separation = 8.0;
  double noise_sigma = 1.0;
  std::uint64_t seed = 0;

  std::string to_json() const;
  // Unknown keys are rejected; absent keys keep their defaults.
  static SynthSpec from_json(std::string_view text);
};

struct SynthData {
  FeatureStore store;
  std::vector<VerbObjectPair> pairs;  // sorted ground truth
};

// Every verb gets a random unit direction. Class i < n_verbs always takes
// verb i, then each class draws up to 3 verbs in total (at least 1). A
// class centroid is the normalized sum of its verbs' directions times
// cluster_separation; instances add isotropic N(0, noise_sigma^2) noise.
// Verbs are named "verbNN", classes "objectNN".
SynthData synth_features(const SynthSpec& spec);

}  // namespace vground::dataset

#endif  // VGROUND_DATASET_SYNTH_H_
