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

#include "vground/dataset/vocabulary.h"

#include <utility>

#include "vground/util/error.h"
#include "vground/util/hash.h"
#include "vground/util/rng.h"

namespace vground::dataset {

const char* to_string(UnkPolicy policy) {
  return policy == UnkPolicy::kReservedUnk ? "reserved-unk" : "hashed-random";
}

UnkPolicy parse_unk_policy(std::string_view text) {
  if (text == "reserved-unk") return UnkPolicy::kReservedUnk;
  if (text == "hashed-random") return UnkPolicy::kHashedRandom;
  throw ConfigError("unknown unk_policy '" + std::string(text) +
                    "' (expected reserved-unk or hashed-random)");
}

Vocabulary::Vocabulary(UnkPolicy policy, std::uint64_t seed) : policy_(policy), seed_(seed) {
  add(kPadToken);
  add(kUnkToken);
}

Vocabulary Vocabulary::build(std::span<const std::vector<std::string>> commands, UnkPolicy policy,
                             std::uint64_t seed) {
  Vocabulary vocab(policy, seed);
  for (const auto& command : commands) {
    for (const auto& tok : command) vocab.add(tok);
  }
  return vocab;
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> id_to_token, UnkPolicy policy,
                                   std::uint64_t seed) {
  if (id_to_token.size() < 2 || id_to_token[kPadId] != kPadToken ||
      id_to_token[kUnkId] != kUnkToken) {
    throw DataError("vocabulary must start with the reserved <pad> and <unk> tokens");
  }
  Vocabulary vocab(policy, seed);
  for (std::size_t i = 2; i < id_to_token.size(); ++i) {
    if (vocab.contains(id_to_token[i])) {
      throw DataError("vocabulary token '" + id_to_token[i] + "' appears twice");
    }
    vocab.add(id_to_token[i]);
  }
  return vocab;
}

bool Vocabulary::contains(std::string_view token) const {
  return token_to_id_.contains(std::string(token));
}

TokenId Vocabulary::add(std::string_view token) {
  auto [it, inserted] =
      token_to_id_.try_emplace(std::string(token), static_cast<TokenId>(id_to_token_.size()));
  if (inserted) id_to_token_.emplace_back(token);
  return it->second;
}

TokenId Vocabulary::lookup(std::string_view token) const {
  auto it = token_to_id_.find(std::string(token));
  if (it != token_to_id_.end()) return it->second;
  if (policy_ == UnkPolicy::kReservedUnk) return kUnkId;
  const std::uint64_t h = mix64(fnv1a64(token) ^ mix64(seed_));
  return static_cast<TokenId>(size() + (h % kHashBuckets));
}

std::string Vocabulary::token(TokenId id) const {
  if (id < id_to_token_.size()) return id_to_token_[id];
  return "<oov:" + std::to_string(id) + ">";
}

TokenizedCommand Vocabulary::encode(std::span<const std::string> tokens) const {
  TokenizedCommand out;
  out.tokens.assign(tokens.begin(), tokens.end());
  out.token_ids.reserve(tokens.size());
  for (const auto& t : tokens) out.token_ids.push_back(lookup(t));
  return out;
}

}  // namespace vground::dataset
