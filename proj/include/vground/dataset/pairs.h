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

#ifndef VGROUND_DATASET_PAIRS_H_
#define VGROUND_DATASET_PAIRS_H_

#include <compare>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vground::dataset {

// "object_class can be used to <verb>".
struct VerbObjectPair {
  std::string verb;
  std::string object_class;

  friend auto operator<=>(const VerbObjectPair&, const VerbObjectPair&) = default;
};

// Membership lookup over a pair inventory.
class PairSet {
 public:
  PairSet() = default;
  explicit PairSet(std::span<const VerbObjectPair> pairs);

  void insert(const VerbObjectPair& pair) { pairs_.insert(pair); }
  bool contains(std::string_view verb, std::string_view object_class) const;
  std::size_t size() const { return pairs_.size(); }
  const std::set<VerbObjectPair>& pairs() const { return pairs_; }

 private:
  std::set<VerbObjectPair> pairs_;
};

// Parses the miner's TSV output (verb, object, optional frequency). Pairs
// are lowercased, deduplicated and sorted. Blank lines are ignored.
// Malformed lines raise ParseError; a file without pairs raises DataError.
std::vector<VerbObjectPair> parse_pairs(std::string_view text);
std::vector<VerbObjectPair> load_pairs(const std::string& path);

// Two-column TSV, one pair per line.
std::string format_pairs(std::span<const VerbObjectPair> pairs);

// Sorted distinct object classes / verbs of the inventory.
std::vector<std::string> object_classes_of(std::span<const VerbObjectPair> pairs);
std::vector<std::string> verbs_of(std::span<const VerbObjectPair> pairs);

}  // namespace vground::dataset

#endif  // VGROUND_DATASET_PAIRS_H_
