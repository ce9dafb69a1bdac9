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

#include "vground/miner/conllu.h"

#include <utility>

#include "vground/util/error.h"
#include "vground/util/text.h"

namespace vground::miner {
namespace {

constexpr std::size_t kColumns = 10;
constexpr std::string_view kSentIdPrefix = "sent_id";

// Returns the value of a "# sent_id = X" comment, or empty.
std::string_view sent_id_of(std::string_view comment) {
  comment.remove_prefix(1);  // '#'
  comment = trim(comment);
  if (!comment.starts_with(kSentIdPrefix)) return {};
  comment.remove_prefix(kSentIdPrefix.size());
  comment = trim(comment);
  if (comment.empty() || comment.front() != '=') return {};
  comment.remove_prefix(1);
  return trim(comment);
}

void validate(const ParsedSentence& sentence, std::size_t first_line) {
  const auto n = static_cast<std::uint32_t>(sentence.tokens.size());
  const auto where = [&] {
    return "sentence '" + sentence.sentence_id + "' (starting line " +
           std::to_string(first_line) + ")";
  };
  for (std::uint32_t i = 0; i < n; ++i) {
    const DepToken& tok = sentence.tokens[i];
    if (tok.index != i + 1) {
      throw DataError(where() + ": token ids not contiguous from 1 (expected " +
                      std::to_string(i + 1) + ", got " + std::to_string(tok.index) + ")");
    }
    if (tok.head > n) {
      throw DataError(where() + ": head " + std::to_string(tok.head) + " of token " +
                      std::to_string(tok.index) + " out of range");
    }
    if (tok.head == tok.index) {
      throw DataError(where() + ": token " + std::to_string(tok.index) + " is its own head");
    }
  }
}

}  // namespace

std::vector<ParsedSentence> parse_conllu(std::string_view text) {
  std::vector<ParsedSentence> sentences;
  ParsedSentence current;
  std::string pending_id;
  bool in_block = false;
  std::size_t block_line = 0;
  std::size_t ordinal = 0;

  auto flush = [&] {
    if (in_block && !current.tokens.empty()) {
      ++ordinal;
      current.sentence_id = pending_id.empty() ? std::to_string(ordinal) : pending_id;
      validate(current, block_line);
      sentences.push_back(std::move(current));
    }
    current = ParsedSentence{};
    pending_id.clear();
    in_block = false;
  };

  const std::vector<std::string_view> lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    std::string_view line = lines[i];
    if (trim(line).empty()) {
      flush();
      continue;
    }
    if (!in_block) {
      in_block = true;
      block_line = lineno;
    }
    if (line.front() == '#') {
      if (std::string_view id = sent_id_of(line); !id.empty()) pending_id = std::string(id);
      continue;
    }

    const std::vector<std::string_view> cols = split(line, '\t');
    if (cols.size() != kColumns) {
      throw ParseError(lineno, "expected " + std::to_string(kColumns) + " tab-separated columns, got " +
                                   std::to_string(cols.size()));
    }
    const std::string_view id = cols[0];
    if (id.find('-') != std::string_view::npos || id.find('.') != std::string_view::npos) {
      continue;  // multiword range or empty node
    }

    unsigned long long index = 0;
    unsigned long long head = 0;
    if (!parse_uint(id, index) || index == 0) {
      throw ParseError(lineno, "token ID '" + std::string(id) + "' is not a positive integer");
    }
    if (!parse_uint(cols[6], head)) {
      throw ParseError(lineno, "HEAD '" + std::string(cols[6]) + "' is not an integer");
    }

    DepToken tok;
    tok.index = static_cast<std::uint32_t>(index);
    tok.surface_form = std::string(cols[1]);
    // An unspecified lemma falls back to the lowercased form.
    tok.lemma = ascii_lower(cols[2] == "_" && cols[1] != "_" ? cols[1] : cols[2]);
    tok.upos = std::string(cols[3]);
    tok.head = static_cast<std::uint32_t>(head);
    tok.deprel = std::string(cols[7]);
    if (tok.lemma.empty()) throw ParseError(lineno, "empty lemma");
    current.tokens.push_back(std::move(tok));
  }
  flush();
  return sentences;
}

}  // namespace vground::miner
