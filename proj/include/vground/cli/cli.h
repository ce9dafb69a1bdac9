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

#ifndef VGROUND_CLI_CLI_H_
#define VGROUND_CLI_CLI_H_

#include <ostream>

namespace vground::cli {

// Parses argv and runs one subcommand. Returns the process exit code:
// 0 success, 1 usage error, 2 data or validation error, 3 numerical
// failure. Errors go to `err` as "error_code: <n> <category>: <message>".
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vground::cli

#endif  // VGROUND_CLI_CLI_H_
