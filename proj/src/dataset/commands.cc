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

#include "vground/dataset/commands.h"

#include <array>
#include <utility>

#include "vground/util/binio.h"
#include "vground/util/error.h"
#include "vground/util/text.h"

namespace vground::dataset {
namespace {

constexpr std::string_view kVerbSlot = "{verb}";
constexpr std::string_view kObjectSlot = "{object}";

std::size_t count_of(std::string_view s, std::string_view needle) {
  std::size_t n = 0;
  for (std::size_t pos = s.find(needle); pos != std::string_view::npos;
       pos = s.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

void replace_once(std::string& s, std::string_view slot, std::string_view value) {
  const std::size_t pos = s.find(slot);
  if (pos != std::string::npos) s.replace(pos, slot.size(), value);
}

bool is_ascii_punct(char c) {
  return (c >= '!' && c <= '/') || (c >= ':' && c <= '@') || (c >= '[' && c <= '`') ||
         (c >= '{' && c <= '~');
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

}  // namespace

const char* to_string(CommandMode mode) {
  switch (mode) {
    case CommandMode::kVerbOnly:
      return "verb-only";
    case CommandMode::kVerbNoun:
      return "verb+noun";
    case CommandMode::kVerbUnknownNoun:
      return "verb+unknown-noun";
  }
  return "?";
}

CommandMode parse_command_mode(std::string_view text) {
  if (text == "verb-only") return CommandMode::kVerbOnly;
  if (text == "verb+noun") return CommandMode::kVerbNoun;
  if (text == "verb+unknown-noun") return CommandMode::kVerbUnknownNoun;
  throw ConfigError("unknown command mode '" + std::string(text) +
                    "' (expected verb-only, verb+noun or verb+unknown-noun)");
}

CommandTemplate::CommandTemplate(std::string pattern) : pattern_(std::move(pattern)) {
  if (count_of(pattern_, kVerbSlot) != 1) {
    throw DataError("template '" + pattern_ + "' must contain {verb} exactly once");
  }
  const std::size_t objects = count_of(pattern_, kObjectSlot);
  if (objects > 1) throw DataError("template '" + pattern_ + "' contains {object} more than once");
  has_object_ = objects == 1;
}

bool CommandTemplate::applies_to(CommandMode mode) const {
  return has_object_ == (mode != CommandMode::kVerbOnly);
}

std::string CommandTemplate::render(std::string_view verb, std::string_view object) const {
  std::string out = pattern_;
  replace_once(out, kVerbSlot, verb);
  if (has_object_) replace_once(out, kObjectSlot, object);
  return out;
}

std::vector<CommandTemplate> parse_templates(std::string_view text) {
  std::vector<CommandTemplate> out;
  const std::vector<std::string_view> lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = trim(lines[i]);
    if (line.empty() || line.front() == '#') continue;
    try {
      out.emplace_back(std::string(line));
    } catch (const DataError& e) {
      throw ParseError(i + 1, e.what());
    }
  }
  return out;
}

std::vector<CommandTemplate> load_templates(const std::string& path) {
  try {
    return parse_templates(read_file(path));
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

std::vector<CommandTemplate> templates_for(std::span<const CommandTemplate> templates,
                                           CommandMode mode) {
  std::vector<CommandTemplate> out;
  for (const auto& t : templates) {
    if (t.applies_to(mode)) out.push_back(t);
  }
  return out;
}

TemplateSplit disjoint_template_split(std::span<const CommandTemplate> templates) {
  TemplateSplit out;
  std::size_t verb_only = 0;
  std::size_t with_object = 0;
  for (const auto& t : templates) {
    std::size_t& n = t.has_object() ? with_object : verb_only;
    (n++ % 2 == 0 ? out.train : out.eval).push_back(t);
  }
  return out;
}

std::vector<std::string> expand_templates(const VerbObjectPair& pair,
                                          std::span<const CommandTemplate> templates,
                                          CommandMode mode) {
  std::vector<std::string> out;
  for (const auto& t : templates) {
    if (t.applies_to(mode)) out.push_back(t.render(pair.verb, pair.object_class));
  }
  if (out.empty()) {
    throw DataError(std::string("no template applies to mode ") + to_string(mode));
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view command) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < command.size()) {
    while (i < command.size() && is_space(command[i])) ++i;
    std::size_t j = i;
    while (j < command.size() && !is_space(command[j])) ++j;
    std::string_view word = command.substr(i, j - i);
    while (!word.empty() && is_ascii_punct(word.front())) word.remove_prefix(1);
    while (!word.empty() && is_ascii_punct(word.back())) word.remove_suffix(1);
    if (!word.empty()) tokens.push_back(ascii_lower(word));
    i = j;
  }
  if (tokens.empty()) {
    throw DataError("command '" + std::string(command) + "' has no tokens");
  }
  return tokens;
}

std::span<const std::string> default_nonce_words() {
  static const std::array<std::string, 5> kNonces = {"dax", "blicket", "wug", "toma", "fep"};
  return kNonces;
}

}  // namespace vground::dataset
