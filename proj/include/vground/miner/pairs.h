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

#ifndef VGROUND_MINER_PAIRS_H_
#define VGROUND_MINER_PAIRS_H_

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "vground/miner/conllu.h"

namespace vground::miner {

// A verb/direct-object co-occurrence. frequency == source_ids.size().
struct MinedPair {
  std::string verb;
  std::string object;
  std::uint64_t frequency = 1;
  std::vector<std::string> source_ids;

  friend bool operator==(const MinedPair&, const MinedPair&) = default;
};

// UD v2 and v1 labels for a direct object.
inline const std::set<std::string>& default_object_relations() {
  static const std::set<std::string> kRelations = {"obj", "dobj"};
  return kRelations;
}

// Emits (head lemma, token lemma) for every token attached by one of
// `relations` to a head whose UPOS is VERB, in token order.
std::vector<MinedPair> extract_pairs(
    const ParsedSentence& sentence,
    const std::set<std::string>& relations = default_object_relations());

// Merges equal (verb, object) pairs, summing frequencies and concatenating
// source ids in input order. Output sorted by (verb, object).
std::vector<MinedPair> aggregate_pairs(std::span<const MinedPair> pairs);

// Keeps pairs whose object is whitelisted, whose verb is whitelisted when a
// verb list is given, and whose frequency reaches min_frequency. Output
// sorted by (verb, object). An empty object whitelist is a ConfigError.
std::vector<MinedPair> filter_pairs(std::span<const MinedPair> pairs,
                                    const std::optional<std::set<std::string>>& verb_whitelist,
                                    const std::set<std::string>& object_whitelist,
                                    std::uint64_t min_frequency);

// Parses every sentence in every file, extracts and aggregates. `paths`
// are processed in the given order.
std::vector<MinedPair> mine_files(std::span<const std::string> paths,
                                  const std::set<std::string>& relations = default_object_relations());

// "verb\tobject\tfrequency\n" per pair, in the given order.
std::string format_pairs_tsv(std::span<const MinedPair> pairs);

}  // namespace vground::miner

#endif  // VGROUND_MINER_PAIRS_H_
