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

#include "vground/dataset/pairs.h"

#include <algorithm>

#include "vground/util/binio.h"
#include "vground/util/error.h"
#include "vground/util/text.h"

namespace vground::dataset {

PairSet::PairSet(std::span<const VerbObjectPair> pairs) : pairs_(pairs.begin(), pairs.end()) {}

bool PairSet::contains(std::string_view verb, std::string_view object_class) const {
  return pairs_.contains(VerbObjectPair{std::string(verb), std::string(object_class)});
}

std::vector<VerbObjectPair> parse_pairs(std::string_view text) {
  std::set<VerbObjectPair> unique;
  const std::vector<std::string_view> lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const std::vector<std::string_view> cols = split(lines[i], '\t');
    if (cols.size() < 2 || cols.size() > 3) {
      throw ParseError(i + 1, "expected 'verb<TAB>object[<TAB>frequency]', got " +
                                  std::to_string(cols.size()) + " column(s)");
    }
    const std::string verb = ascii_lower(trim(cols[0]));
    const std::string object = ascii_lower(trim(cols[1]));
    if (verb.empty() || object.empty()) throw ParseError(i + 1, "empty verb or object");
    if (cols.size() == 3) {
      unsigned long long freq = 0;
      if (!parse_uint(trim(cols[2]), freq) || freq == 0) {
        throw ParseError(i + 1, "frequency '" + std::string(cols[2]) + "' is not a positive integer");
      }
    }
    unique.insert(VerbObjectPair{verb, object});
  }
  if (unique.empty()) throw DataError("pair file contains no pairs");
  return {unique.begin(), unique.end()};
}

std::vector<VerbObjectPair> load_pairs(const std::string& path) {
  try {
    return parse_pairs(read_file(path));
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

std::string format_pairs(std::span<const VerbObjectPair> pairs) {
  std::string out;
  for (const auto& p : pairs) out += p.verb + '\t' + p.object_class + '\n';
  return out;
}

std::vector<std::string> object_classes_of(std::span<const VerbObjectPair> pairs) {
  std::set<std::string> classes;
  for (const auto& p : pairs) classes.insert(p.object_class);
  return {classes.begin(), classes.end()};
}

std::vector<std::string> verbs_of(std::span<const VerbObjectPair> pairs) {
  std::set<std::string> verbs;
  for (const auto& p : pairs) verbs.insert(p.verb);
  return {verbs.begin(), verbs.end()};
}

}  // namespace vground::dataset
