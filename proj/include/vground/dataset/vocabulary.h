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

#ifndef VGROUND_DATASET_VOCABULARY_H_
#define VGROUND_DATASET_VOCABULARY_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace vground::dataset {

// How a token absent from training resolves at lookup time.
//   kReservedUnk  -> id 1, a trainable row that training never touches.
//   kHashedRandom -> a pseudo-id >= size(), derived from the token string
//                    and seed; the encoder maps it to a frozen random
//                    embedding generated from the same seed.
enum class UnkPolicy { kReservedUnk, kHashedRandom };

const char* to_string(UnkPolicy policy);
UnkPolicy parse_unk_policy(std::string_view text);

using TokenId = std::uint32_t;

struct TokenizedCommand {
  std::vector<std::string> tokens;
  std::vector<TokenId> token_ids;
};

class Vocabulary {
 public:
  static constexpr TokenId kPadId = 0;
  static constexpr TokenId kUnkId = 1;
  static constexpr std::string_view kPadToken = "<pad>";
  static constexpr std::string_view kUnkToken = "<unk>";
  // Pseudo-ids for unknown tokens fall in [size(), size() + kHashBuckets).
  static constexpr std::uint32_t kHashBuckets = 1u << 24;

  // Reserved entries only.
  Vocabulary(UnkPolicy policy, std::uint64_t seed);

  // Ids assigned by first occurrence across `commands`, after the reserved
  // ids.
  static Vocabulary build(std::span<const std::vector<std::string>> commands, UnkPolicy policy,
                          std::uint64_t seed);

  // Rebuilds from an id-ordered token list (as stored in checkpoints). The
  // first two entries must be the reserved tokens.
  static Vocabulary from_tokens(std::vector<std::string> id_to_token, UnkPolicy policy,
                                std::uint64_t seed);

  // Trained id count, reserved ids included.
  std::size_t size() const { return id_to_token_.size(); }
  UnkPolicy policy() const { return policy_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<std::string>& tokens() const { return id_to_token_; }

  bool contains(std::string_view token) const;
  // Appends if absent; returns the id.
  TokenId add(std::string_view token);
  TokenId lookup(std::string_view token) const;
  // Inverse of a trained id; pseudo-ids render as "<oov:N>".
  std::string token(TokenId id) const;

  TokenizedCommand encode(std::span<const std::string> tokens) const;

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.policy_ == b.policy_ && a.seed_ == b.seed_ && a.id_to_token_ == b.id_to_token_;
  }

 private:
  UnkPolicy policy_;
  std::uint64_t seed_;
  std::vector<std::string> id_to_token_;
  std::unordered_map<std::string, TokenId> token_to_id_;
};

}  // namespace vground::dataset

#endif  // VGROUND_DATASET_VOCABULARY_H_
