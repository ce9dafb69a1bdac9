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

#ifndef VGROUND_DATASET_COMMANDS_H_
#define VGROUND_DATASET_COMMANDS_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vground/dataset/pairs.h"

namespace vground::dataset {

// Which placeholders a command carries.
//   kVerbOnly        "hand me something to {verb}"
//   kVerbNoun        "give me the {object} to {verb}"
//   kVerbUnknownNoun verb+noun surface form with a nonce word in the object
//                    slot; only meaningful for evaluation tasks.
enum class CommandMode { kVerbOnly, kVerbNoun, kVerbUnknownNoun };

const char* to_string(CommandMode mode);
// Accepts "verb-only", "verb+noun", "verb+unknown-noun".
CommandMode parse_command_mode(std::string_view text);

// A command pattern with exactly one "{verb}" and at most one "{object}".
class CommandTemplate {
 public:
  // Throws DataError when the placeholder counts are wrong.
  explicit CommandTemplate(std::string pattern);

  const std::string& pattern() const { return pattern_; }
  bool has_object() const { return has_object_; }
  // Verb-only templates serve kVerbOnly; object templates serve the others.
  bool applies_to(CommandMode mode) const;

  std::string render(std::string_view verb, std::string_view object = {}) const;

  friend bool operator==(const CommandTemplate& a, const CommandTemplate& b) {
    return a.pattern_ == b.pattern_;
  }

 private:
  std::string pattern_;
  bool has_object_ = false;
};

// One pattern per line; blank lines and '#' comments skipped.
std::vector<CommandTemplate> parse_templates(std::string_view text);
std::vector<CommandTemplate> load_templates(const std::string& path);

// Templates usable for `mode`, in file order.
std::vector<CommandTemplate> templates_for(std::span<const CommandTemplate> templates,
                                           CommandMode mode);

// Alternates the templates of each surface form between a training and an
// evaluation list so test commands never reuse a training pattern.
struct TemplateSplit {
  std::vector<CommandTemplate> train;
  std::vector<CommandTemplate> eval;
};
TemplateSplit disjoint_template_split(std::span<const CommandTemplate> templates);

// One command per applicable template. kVerbUnknownNoun renders like
// kVerbNoun with the pair's object. Throws DataError if none applies.
std::vector<std::string> expand_templates(const VerbObjectPair& pair,
                                          std::span<const CommandTemplate> templates,
                                          CommandMode mode);

// Lowercases, splits on whitespace, strips leading/trailing ASCII
// punctuation per token, drops empty tokens. Throws DataError if nothing
// remains.
std::vector<std::string> tokenize(std::string_view command);

// Out-of-vocabulary stand-ins for the object slot in unknown-noun tasks.
std::span<const std::string> default_nonce_words();

}  // namespace vground::dataset

#endif  // VGROUND_DATASET_COMMANDS_H_
