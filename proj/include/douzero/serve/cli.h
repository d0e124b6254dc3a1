// Copyright 2026 The DouZero-CPP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DOUZERO_SERVE_CLI_H_
#define DOUZERO_SERVE_CLI_H_

#include <iosfwd>

namespace douzero::serve {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNonFinite = 3;
inline constexpr int kExitCountMismatch = 4;

// Entry point of the `douzero` command-line tool.
int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace douzero::serve

#endif  // DOUZERO_SERVE_CLI_H_
