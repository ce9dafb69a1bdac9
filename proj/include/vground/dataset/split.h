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

#ifndef VGROUND_DATASET_SPLIT_H_
#define VGROUND_DATASET_SPLIT_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vground/dataset/pairs.h"

namespace vground::dataset {

// Class-disjoint train/test partition. Verbs may appear on both sides;
// object classes never do.
struct SplitManifest {
  std::uint64_t seed = 0;
  double holdout_fraction = 0.2;
  std::vector<std::string> train_classes;  // sorted
  std::vector<std::string> test_classes;   // sorted
  std::vector<VerbObjectPair> train_pairs;  // sorted
  std::vector<VerbObjectPair> test_pairs;   // sorted

  std::vector<VerbObjectPair> all_pairs() const;

  std::string to_json() const;
  static SplitManifest from_json(std::string_view text);
  void save(const std::string& path) const;
  static SplitManifest load(const std::string& path);

  friend bool operator==(const SplitManifest&, const SplitManifest&) = default;
};

// Number of held-out classes: holdout_fraction * n_classes rounded to
// nearest (216 classes at 0.2 hold out 43).
std::size_t holdout_count(std::size_t n_classes, double holdout_fraction);

// Shuffles the distinct classes with `seed`, holds out the first
// holdout_count() of them and routes each pair by its class. Throws
// DataError when either side would get no class.
SplitManifest split_by_object(std::span<const VerbObjectPair> pairs, double holdout_fraction,
                              std::uint64_t seed);

}  // namespace vground::dataset

#endif  // VGROUND_DATASET_SPLIT_H_
