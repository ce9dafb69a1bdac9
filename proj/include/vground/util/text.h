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

#ifndef VGROUND_UTIL_TEXT_H_
#define VGROUND_UTIL_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

namespace vground {

// ASCII-only lowercasing; bytes >= 0x80 pass through unchanged.
std::string ascii_lower(std::string_view s);

std::vector<std::string_view> split(std::string_view s, char sep);

// Splits into lines on '\n', dropping a trailing '\r' from each.
std::vector<std::string_view> split_lines(std::string_view text);

std::string_view trim(std::string_view s);

// Parses a base-10 unsigned integer covering the whole string.
bool parse_uint(std::string_view s, unsigned long long& out);

// Reads a one-entry-per-line list; blank lines and '#' comments skipped,
// entries trimmed and lowercased.
std::vector<std::string> read_word_list(const std::string& path);

}  // namespace vground

#endif  // VGROUND_UTIL_TEXT_H_
