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

#ifndef VGROUND_MINER_CONLLU_H_
#define VGROUND_MINER_CONLLU_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace vground::miner {

struct DepToken {
  std::uint32_t index = 0;  // 1-based
  std::string surface_form;
  std::string lemma;  // lowercased at ingestion
  std::string upos;
  std::uint32_t head = 0;  // 0 = root
  std::string deprel;
};

struct ParsedSentence {
  std::string sentence_id;
  std::vector<DepToken> tokens;

  // Token with the given 1-based index; index must be in [1, size].
  const DepToken& token(std::uint32_t index) const { return tokens[index - 1]; }
};

// Reads CoNLL-U text. Uses the ID, FORM, LEMMA, UPOS, HEAD and DEPREL
// columns; multiword ranges ("3-4") and empty nodes ("3.1") are skipped.
// The sentence id comes from a "# sent_id = ..." comment, else the 1-based
// block ordinal.
//
// Throws ParseError (with line number) for malformed token lines and
// DataError naming the sentence for structural problems (non-contiguous
// ids, head out of range, self-loops).
std::vector<ParsedSentence> parse_conllu(std::string_view text);

}  // namespace vground::miner

#endif  // VGROUND_MINER_CONLLU_H_
