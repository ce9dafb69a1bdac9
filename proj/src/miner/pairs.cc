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

#include "vground/miner/pairs.h"

#include <algorithm>
#include <map>
#include <tuple>
#include <utility>

#include "vground/util/binio.h"
#include "vground/util/error.h"

namespace vground::miner {

std::vector<MinedPair> extract_pairs(const ParsedSentence& sentence,
                                     const std::set<std::string>& relations) {
  std::vector<MinedPair> out;
  for (const DepToken& tok : sentence.tokens) {
    if (tok.head == 0 || !relations.contains(tok.deprel)) continue;
    const DepToken& head = sentence.token(tok.head);
    if (head.upos != "VERB") continue;
    out.push_back(MinedPair{head.lemma, tok.lemma, 1, {sentence.sentence_id}});
  }
  return out;
}

std::vector<MinedPair> aggregate_pairs(std::span<const MinedPair> pairs) {
  std::map<std::pair<std::string, std::string>, MinedPair> merged;
  for (const MinedPair& p : pairs) {
    auto [it, inserted] = merged.try_emplace({p.verb, p.object}, p);
    if (inserted) continue;
    MinedPair& acc = it->second;
    acc.frequency += p.frequency;
    acc.source_ids.insert(acc.source_ids.end(), p.source_ids.begin(), p.source_ids.end());
  }
  std::vector<MinedPair> out;
  out.reserve(merged.size());
  for (auto& [key, pair] : merged) out.push_back(std::move(pair));
  return out;
}

std::vector<MinedPair> filter_pairs(std::span<const MinedPair> pairs,
                                    const std::optional<std::set<std::string>>& verb_whitelist,
                                    const std::set<std::string>& object_whitelist,
                                    std::uint64_t min_frequency) {
  if (object_whitelist.empty()) {
    throw ConfigError("object whitelist is empty; every pair would be dropped");
  }
  std::vector<MinedPair> out;
  for (const MinedPair& p : pairs) {
    if (!object_whitelist.contains(p.object)) continue;
    if (verb_whitelist && !verb_whitelist->contains(p.verb)) continue;
    if (p.frequency < min_frequency) continue;
    out.push_back(p);
  }
  std::stable_sort(out.begin(), out.end(), [](const MinedPair& a, const MinedPair& b) {
    return std::tie(a.verb, a.object) < std::tie(b.verb, b.object);
  });
  return out;
}

std::vector<MinedPair> mine_files(std::span<const std::string> paths,
                                  const std::set<std::string>& relations) {
  std::vector<MinedPair> raw;
  for (const std::string& path : paths) {
    std::vector<ParsedSentence> sentences;
    try {
      sentences = parse_conllu(read_file(path));
    } catch (const DataError& e) {
      throw DataError(path + ": " + e.what());
    }
    for (const ParsedSentence& s : sentences) {
      std::vector<MinedPair> found = extract_pairs(s, relations);
      raw.insert(raw.end(), std::make_move_iterator(found.begin()),
                 std::make_move_iterator(found.end()));
    }
  }
  return aggregate_pairs(raw);
}

std::string format_pairs_tsv(std::span<const MinedPair> pairs) {
  std::string out;
  for (const MinedPair& p : pairs) {
    out += p.verb;
    out += '\t';
    out += p.object;
    out += '\t';
    out += std::to_string(p.frequency);
    out += '\n';
  }
  return out;
}

}  // namespace vground::miner
